from itertools import product

import pytest
from hypothesis import given
import hypothesis.strategies as st

from latnorm.connectivity import (
    Connectivity,
    ConnectivityClass,
    classify,
    classify_convex,
    is_4_connected,
    is_8_connected,
    point_runs,
)
from latnorm.errors import EmptySetError
from latnorm.lattice import convex_hull
from latnorm.oracle import classify_bruteforce

from conftest import digital_convex_sets

C4, A4, C8, DIS = (
    Connectivity.CONNECTED4,
    Connectivity.ALMOST4,
    Connectivity.CONNECTED8_ONLY,
    Connectivity.DISCONNECTED,
)


@pytest.mark.parametrize(
    "s, expected",
    [({(0, 0), (1, 0), (1, 1)}, True), ({(0, 0), (1, 1)}, False), ({(0, 0)}, True)],
)
def test_is_4_connected_examples(s, expected):
    assert is_4_connected(s) is expected


@pytest.mark.parametrize(
    "s, expected",
    [({(0, 0), (1, 1)}, True), ({(0, 0), (2, 0)}, False), ({(0, 0), (0, 1), (1, 1)}, True)],
)
def test_is_8_connected_examples(s, expected):
    assert is_8_connected(s) is expected


def test_classify_examples():
    assert classify({(0, 0), (0, 1), (1, 1), (-1, 2)}) == ConnectivityClass(A4, (-1, 2))
    assert classify(set(product(range(3), range(3)))).tag is C4
    assert classify({(0, 0), (1, 1), (2, 2)}).tag is C8
    assert classify({(0, 0), (5, 5)}).tag is DIS


def test_diagonal_pair_is_almost4_with_smallest_witness():
    assert classify({(0, 0), (1, 1)}) == ConnectivityClass(A4, (0, 0))


def test_singleton_is_connected4():
    assert classify({(3, -2)}).tag is C4


def test_empty_raises():
    for fn in (classify, is_4_connected, is_8_connected):
        with pytest.raises(EmptySetError):
            fn(set())


def test_witness_presence_enforced():
    with pytest.raises(ValueError):
        ConnectivityClass(A4)
    with pytest.raises(ValueError):
        ConnectivityClass(C4, (0, 0))


def test_strength_order():
    assert C4.at_least(A4) and A4.at_least(A4) and not C8.at_least(A4)
    assert ConnectivityClass(C4).almost4 and not ConnectivityClass(C8).almost4


def test_point_runs():
    assert point_runs({(0, 0), (1, 0), (3, 0), (2, 1)}) == [(0, 0, 1), (0, 3, 3), (1, 2, 2)]


def test_two_singleton_components():
    # both components are single points; the smaller one is the witness
    assert classify({(0, 0), (1, 1)}).witness == (0, 0)
    # a long run plus a diagonal singleton
    s = {(0, 0), (1, 0), (2, 0), (3, 1)}
    assert classify(s) == ConnectivityClass(A4, (3, 1))


def test_agrees_with_definition_on_small_grid_sample():
    # the exhaustive 4x4 sweep lives in the acceptance module
    cells = list(product(range(3), range(3)))
    for mask in range(1, 1 << len(cells)):
        s = {c for i, c in enumerate(cells) if mask >> i & 1}
        assert classify(s) == classify_bruteforce(s)


@given(st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=12))
def test_agrees_with_definition_random(s):
    assert classify(s) == classify_bruteforce(s)


@given(st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=12))
def test_strong_classes_are_8_connected(s):
    if classify(s).almost4:
        assert is_8_connected(s)


@given(digital_convex_sets())
def test_classify_convex_matches_point_classifier(s):
    assert classify_convex(convex_hull(s)) == classify(s)
