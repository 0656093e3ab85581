from itertools import product

import pytest
from hypothesis import given, settings

from latnorm.connectivity import Connectivity, classify, classify_convex
from latnorm.diameter import DiameterResult, lattice_diameter_bruteforce, lattice_diameter_fast
from latnorm.errors import (
    DegenerateTopError,
    InvariantViolation,
    NormalizationFailed,
    NotDigitalConvexError,
    PreconditionViolation,
)
from latnorm.instances import pompom
from latnorm.lattice import (
    IDENTITY,
    apply_map,
    compose,
    convex_hull,
    horizontal_shear,
    invert,
    is_digital_convex,
    lattice_points_in_polygon,
    map_hull,
    translation,
    vertical_shear,
)
from latnorm.normalize import (
    BOTTOM_RIGHT_SHEAR,
    DIRECT4,
    POMPOM,
    TOP_CENTERED,
    VERTICAL_FLIP,
    WEDGE_CASE1,
    QuadDecomposition,
    center_top_shear,
    connect_bottom,
    detect_pompom,
    fallback_shear_search,
    finalize_general,
    in_wedge,
    lemma2_region,
    lemma3_region,
    mirror,
    normalize_diameter_to_horizontal,
    orient_and_decompose,
    pompom_bottom_guard,
    pompom_transform,
    to_almost_4_connected,
)
from latnorm.oracle import verify_result

from conftest import POMPOM_K2, digital_convex_sets, unimodular_maps

GRID3 = frozenset(product(range(3), range(3)))


def steps_map(steps):
    m = IDENTITY
    for _, step in steps:
        m = compose(step, m)
    return m


# --- diameter frame -------------------------------------------------------


def test_diameter_to_horizontal_identity_when_already_there():
    s = {(0, 0), (1, 0), (2, 0), (1, 1)}
    d = lattice_diameter_fast(s)[0]
    m, image = normalize_diameter_to_horizontal(s, d)
    assert m == IDENTITY and image == s


def test_diameter_to_horizontal_diagonal():
    s = {(0, 0), (1, 1), (2, 2)}
    _, image = normalize_diameter_to_horizontal(s, lattice_diameter_fast(s)[0])
    assert image == {(0, 0), (1, 0), (2, 0)}


def test_diameter_to_horizontal_translation():
    s = {(5, 5), (6, 5)}
    m, _ = normalize_diameter_to_horizontal(s, lattice_diameter_fast(s)[0])
    assert m == translation(-5, -5)


@given(digital_convex_sets())
def test_diameter_frame_endpoints(s):
    d = lattice_diameter_fast(s)[0]
    m, image = normalize_diameter_to_horizontal(s, d)
    assert m(d.p_start) == (0, 0)
    assert m(d.p_end) == (d.k - 1, 0)
    assert lattice_diameter_fast(image)[0].k == d.k


# --- decomposition --------------------------------------------------------


def test_orient_flat_set():
    q = orient_and_decompose({(0, 0), (1, 0), (2, 0)})
    assert q.top == q.bottom == (0, 0) and q.orientation == IDENTITY
    assert q.quad == {(0, 0), (1, 0), (2, 0)}


def test_orient_flips_when_bottom_is_deeper():
    s = lattice_points_in_polygon(convex_hull([(0, 0), (3, 0), (1, 2), (1, -3)]))
    q = orient_and_decompose(s, 4)
    assert q.orientation == VERTICAL_FLIP
    assert q.top == (1, 3) and q.bottom == (1, -2)


def test_quad_point_count():
    q = QuadDecomposition(3, (1, 1), (1, -1))
    assert len(q.quad) == 5
    assert q.upper == {(0, 0), (1, 0), (2, 0), (1, 1)}


# --- centring -------------------------------------------------------------


@pytest.mark.parametrize(
    "k, top, shear",
    [(4, (5, 2), -2), (5, (2, 3), 0), (3, (0, 1), 1), (2, (3, 1), -2)],
)
def test_center_top_examples(k, top, shear):
    assert center_top_shear(QuadDecomposition(k, top, (0, 0))) == horizontal_shear(shear)


def test_center_top_degenerate():
    with pytest.raises(DegenerateTopError):
        center_top_shear(QuadDecomposition(3, (1, 0), (0, 0)))


@given(digital_convex_sets())
def test_centred_top_is_within_half_height(s):
    d = lattice_diameter_fast(s)[0]
    _, s1 = normalize_diameter_to_horizontal(s, d)
    q = orient_and_decompose(s1, d.k)
    if q.top[1] == 0:
        return
    q2 = q.mapped(center_top_shear(q))
    a, b = q2.top
    assert abs((d.k - 1) - 2 * a) <= b


# --- pompom ---------------------------------------------------------------


def test_detect_pompom_k2():
    q = QuadDecomposition(2, (-1, 3), (0, 0))
    assert q.upper == POMPOM_K2
    assert detect_pompom(q)


def test_detect_pompom_negative():
    assert not detect_pompom(QuadDecomposition(4, (1, 3), (0, 0)))


def test_pompom_transform_k2():
    image = apply_map(pompom_transform(), POMPOM_K2)
    assert image == {(0, 0), (1, 1), (0, 1), (-1, 2)}
    assert classify(image) == classify({(0, 0), (1, 1), (0, 1), (-1, 2)})
    assert classify(image).tag is Connectivity.ALMOST4
    assert classify(image).witness == pompom_transform()((-1, 3))


@pytest.mark.parametrize("k", range(2, 9))
def test_pompom_transform_family(k):
    assert classify(apply_map(vertical_shear(1), pompom(k))).almost4


def test_pompom_guard():
    q = QuadDecomposition(2, (-1, 3), (0, 0))
    pompom_bottom_guard(q, (0, -1))
    with pytest.raises(InvariantViolation):
        pompom_bottom_guard(q, (3, -1))


@pytest.mark.parametrize("k", range(2, 7))
def test_pinned_pompom_diameter_takes_pompom_branch(k):
    s = pompom(k)
    d = DiameterResult((0, 0), (k - 1, 0), (1, 0), k)
    m, c, trace = to_almost_4_connected(s, diameter=d)
    assert trace.case_label == POMPOM
    assert not trace.fallback_used
    assert verify_result(s, m, c).ok


# --- lemma regions ---------------------------------------------------------


def test_lemma2_examples():
    assert lemma2_region(4, (6, -2))
    assert not lemma2_region(4, (10, -2))
    assert not lemma2_region(4, (6, -4))
    with pytest.raises(PreconditionViolation):
        lemma2_region(4, (3, -1))


def test_lemma3_examples():
    assert lemma3_region(4, (5, -2))
    assert not lemma3_region(4, (5, -1))
    with pytest.raises(PreconditionViolation):
        lemma3_region(4, (6, -4))
    with pytest.raises(PreconditionViolation):
        lemma3_region(1, (5, -1))


@pytest.mark.parametrize("l", [2, 3, 5, 8])
def test_lemma_regions_imply_almost4(l):
    for x, y in product(range(l + 1, 25), range(-20, 0)):
        hit = lemma2_region(l, (x, y)) or (-l < y and lemma3_region(l, (x, y)))
        if hit:
            tri = lattice_points_in_polygon(convex_hull([(0, 0), (l, 0), (x, y)]))
            assert classify(tri).almost4, (l, x, y)


def test_wedge_membership():
    assert in_wedge(3, (5, -3))
    assert not in_wedge(3, (5, -2))


# --- bottom ----------------------------------------------------------------


def test_bottom_directly_below_is_identity():
    steps, label = connect_bottom(QuadDecomposition(4, (1, 2), (1, -2)))
    assert steps == [] and label == TOP_CENTERED


@pytest.mark.parametrize(
    "k, top, bot, shear",
    [(4, (1, 1), (6, -1), 2), (4, (1, 2), (6, -2), 1), (3, (1, 1), (4, -1), 1)],
)
def test_bottom_right_shear(k, top, bot, shear):
    q = QuadDecomposition(k, top, bot)
    assert lattice_diameter_bruteforce(q.quad).k == k
    steps, label = connect_bottom(q)
    assert label == BOTTOM_RIGHT_SHEAR
    assert steps == [("bottom_right_shear", horizontal_shear(shear))]
    assert classify_convex(map_hull(steps_map(steps), q.hull)).almost4


def test_bottom_left_is_mirrored():
    q = QuadDecomposition(4, (2, 1), (-3, -1))
    assert lattice_diameter_bruteforce(q.quad).k == 4
    steps, _ = connect_bottom(q)
    assert steps[0] == ("mirror_bottom", mirror(4))
    assert classify_convex(map_hull(steps_map(steps), q.hull)).almost4


def test_wedge_case1():
    q = QuadDecomposition(4, (1, 1), (5, -3))
    steps, label = connect_bottom(q)
    assert label == WEDGE_CASE1
    assert steps == [("wedge_case1_shear", horizontal_shear(1))]
    assert classify_convex(map_hull(horizontal_shear(1), q.hull)).almost4


def test_wedge_with_top_above_both_lines_raises():
    with pytest.raises(InvariantViolation):
        connect_bottom(QuadDecomposition(5, (2, 5), (7, -5)))


def test_connect_bottom_needs_centred_top():
    with pytest.raises(PreconditionViolation):
        connect_bottom(QuadDecomposition(3, (5, 1), (1, -1)))


def test_mirror_is_involution():
    assert compose(mirror(7), mirror(7)) == IDENTITY
    assert mirror(7)((0, 0)) == (6, 0)


# --- finalize / fallback ----------------------------------------------------


def test_finalize_identity_when_connected():
    assert finalize_general(convex_hull(GRID3), 3, (0, 0)) == IDENTITY


def test_finalize_constructed_gap():
    hull = convex_hull([(0, 0), (2, 0), (1, 1), (3, -1), (4, -1)])
    s = lattice_points_in_polygon(hull)
    assert not classify(s).almost4
    m = finalize_general(hull, 3, (3, -1))
    assert m == horizontal_shear(1)
    assert classify(apply_map(m, s)).almost4


def test_fallback_identity_on_connected_set():
    assert fallback_shear_search(GRID3, 3) == IDENTITY


def test_fallback_diagonal():
    m = fallback_shear_search({(0, 0), (1, 1), (2, 2)}, 2)
    assert classify(apply_map(m, {(0, 0), (1, 1), (2, 2)})).tag is Connectivity.CONNECTED4


def test_fallback_exhausted():
    with pytest.raises(NormalizationFailed):
        fallback_shear_search({(0, 0), (1, 1), (2, 2)}, 0)


# --- pipeline ----------------------------------------------------------------


def test_pipeline_grid():
    m, c, trace = to_almost_4_connected(GRID3)
    assert classify(c).tag is Connectivity.CONNECTED4
    assert trace.case_label == DIRECT4


def test_pipeline_pompom_k2():
    m, c, trace = to_almost_4_connected(POMPOM_K2)
    assert len(c) == 4
    assert classify(c).tag is Connectivity.ALMOST4
    assert not trace.fallback_used


def test_pipeline_diagonal():
    m, c, _ = to_almost_4_connected({(0, 0), (1, 1), (2, 2)})
    assert c == {(0, 0), (1, 0), (2, 0)}


def test_pipeline_singleton():
    m, c, _ = to_almost_4_connected({(7, 7)})
    assert c == {(0, 0)}


def test_pipeline_rejects_non_convex():
    with pytest.raises(NotDigitalConvexError):
        to_almost_4_connected({(0, 0), (2, 0)})


def test_trace_composes_to_total():
    s = lattice_points_in_polygon(convex_hull([(0, 0), (9, 4), (2, 7), (-3, 1)]))
    m, c, trace = to_almost_4_connected(s)
    assert trace.total() == m
    assert trace.steps[0].name == "diameter_to_horizontal"


@settings(max_examples=300)
@given(digital_convex_sets(coord=15))
def test_pipeline_sound(s):
    m, c, trace = to_almost_4_connected(s)
    assert m.det in (1, -1)
    assert c == apply_map(m, s)
    assert apply_map(invert(m), c) == s
    assert is_digital_convex(c)
    assert classify(c).almost4
    assert lattice_diameter_fast(c)[0].k == lattice_diameter_fast(s)[0].k
    assert not trace.fallback_used


@given(digital_convex_sets(), unimodular_maps())
def test_pipeline_sound_on_sheared_inputs(s, g):
    s = apply_map(g, s)
    m, c, trace = to_almost_4_connected(s)
    assert verify_result(s, m, c).ok
    assert not trace.fallback_used
