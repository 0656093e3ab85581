import hypothesis.strategies as st
from hypothesis import settings

from latnorm.lattice import AffineMap, convex_hull, lattice_points_in_polygon

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

POMPOM_K2 = frozenset({(0, 0), (1, 0), (0, 1), (-1, 3)})


@st.composite
def digital_convex_sets(draw, coord=12, max_points=8):
    """Lattice points of the hull of a few random points."""
    pts = draw(
        st.lists(
            st.tuples(st.integers(-coord, coord), st.integers(-coord, coord)),
            min_size=1,
            max_size=max_points,
        )
    )
    return lattice_points_in_polygon(convex_hull(pts))


@st.composite
def unimodular_maps(draw, bound=5, shift=20):
    a, b, c, d = (draw(st.integers(-bound, bound)) for _ in range(4))
    det = a * d - b * c
    if det not in (1, -1):
        # fall back to a product of elementary shears, always det 1
        s, t = draw(st.integers(-bound, bound)), draw(st.integers(-bound, bound))
        a, b, c, d = 1 + s * t, s, t, 1
    return AffineMap(a, b, c, d, draw(st.integers(-shift, shift)), draw(st.integers(-shift, shift)))


ACCEPTANCE_LINES: list = []


def record_acceptance(number: int, name: str, passed: bool, detail: str = "") -> None:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {name}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
