"""Unimodular normalisation of a digital convex set to an almost 4-connected one.

Pipeline, all in the frame where a lattice diameter runs from (0,0) to
(k-1,0):

1. map the diameter onto the x-axis;
2. flip vertically if the lowest point is further from the axis than the
   highest one, and cut out the quadrilateral spanned by the diameter and
   those two extreme points;
3. shear horizontally so the top point sits as close as possible above the
   middle of the diameter;
4. if the top point is still outside the diameter's column band the upper
   part is the special triangle (0,0), (k-1,0), (-1,k+1), which a vertical
   shear turns almost 4-connected;
5. otherwise shear horizontally once more so the bottom point is either
   below the diameter or close enough to it for the lower triangle to be
   almost 4-connected;
6. repair the bottom row of the full set if it is the only remaining gap.

Horizontal shears keep rows, so the full set's rows contain the
quadrilateral's rows and connectivity of the quadrilateral carries over.
Every step is checked on the actual lattice sets (through their row spans);
a failed check hands over to a bounded shear search, which is logged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .connectivity import Connectivity, ConnectivityClass, classify, classify_convex
from .diameter import DiameterResult, lattice_diameter_fast
from .errors import (
    DegenerateTopError,
    EmptySetError,
    FallbackEngaged,
    InvariantViolation,
    NormalizationFailed,
    NotDigitalConvexError,
    PreconditionViolation,
)
from .lattice import (
    IDENTITY,
    AffineMap,
    Hull,
    Point,
    apply_map,
    compose,
    compose_all,
    convex_hull,
    count_lattice_points,
    horizontal_shear,
    lattice_points_in_polygon,
    map_hull,
    primitive_direction_map,
    row_spans,
    translation,
    vertical_shear,
)

log = logging.getLogger(__name__)

VERTICAL_FLIP = AffineMap(1, 0, 0, -1)

# case labels, weakest intervention first
DIRECT4 = "Direct4"
TOP_CENTERED = "TopCentered"
POMPOM = "Pompom"
BOTTOM_RIGHT_SHEAR = "BottomRightShear"
WEDGE_CASE1 = "WedgeCase1"
GENERAL_FIX = "GeneralFix"
FALLBACK_SEARCH = "FallbackSearch"


def mirror(k: int) -> AffineMap:
    """Reflection about x = (k-1)/2; maps the diameter onto itself."""
    return AffineMap(-1, 0, 0, 1, k - 1, 0)


@dataclass(frozen=True)
class TraceStep:
    name: str
    map: AffineMap
    outcome: str = "n/a"


@dataclass
class NormalizationTrace:
    steps: list = field(default_factory=list)
    case_label: str = DIRECT4
    top_prime: Optional[Point] = None
    bot_prime: Optional[Point] = None
    fallback_used: bool = False

    def add(self, name: str, m: AffineMap, outcome: str = "n/a"):
        self.steps.append(TraceStep(name, m, outcome))

    def total(self) -> AffineMap:
        return compose_all(step.map for step in self.steps)


@dataclass(frozen=True)
class QuadDecomposition:
    """The quadrilateral spanned by the horizontal diameter and the two extreme points."""

    k: int
    top: Point
    bottom: Point
    orientation: AffineMap = IDENTITY

    @property
    def d1(self) -> tuple[Point, Point]:
        return (0, 0), (self.k - 1, 0)

    @property
    def x_mid_numerator(self) -> int:
        """x_mid = (k-1)/2 kept as a numerator over 2."""
        return self.k - 1

    @cached_property
    def hull(self) -> Hull:
        return convex_hull({(0, 0), (self.k - 1, 0), self.top, self.bottom})

    @cached_property
    def quad(self) -> frozenset:
        return lattice_points_in_polygon(self.hull)

    @cached_property
    def upper(self) -> frozenset:
        return frozenset(p for p in self.quad if p[1] >= 0)

    @cached_property
    def lower(self) -> frozenset:
        return frozenset(p for p in self.quad if p[1] <= 0)

    def mapped(self, m: AffineMap) -> "QuadDecomposition":
        """Same decomposition after a map that fixes the diameter row setwise."""
        return QuadDecomposition(self.k, m(self.top), m(self.bottom), self.orientation)


# ---------------------------------------------------------------------------
# Steps


def normalize_diameter_to_horizontal(
    s: Iterable[Point], d: DiameterResult
) -> tuple[AffineMap, frozenset]:
    """Map sending d.p_start to (0,0) and d.p_end to (k-1,0), and the image of s."""
    m = _diameter_map(d)
    return m, apply_map(m, s)


def _diameter_map(d: DiameterResult) -> AffineMap:
    if d.k == 1:
        return translation(-d.p_start[0], -d.p_start[1])
    rot = primitive_direction_map(d.direction)
    x0, y0 = rot(d.p_start)
    return compose(translation(-x0, -y0), rot)


def _extremes(points) -> tuple[Point, Point]:
    ymax = max(p[1] for p in points)
    ymin = min(p[1] for p in points)
    top = min(p for p in points if p[1] == ymax)
    bottom = min(p for p in points if p[1] == ymin)
    return top, bottom


def _diameter_count(points) -> int:
    row = {p[0] for p in points if p[1] == 0}
    k = 0
    while k in row:
        k += 1
    return k


def orient_and_decompose(s1: Iterable[Point], k: Optional[int] = None) -> QuadDecomposition:
    """Pick the extreme points of s1 and flip so the top is the furthest from y=0.

    ``s1`` may be the whole set or just its hull vertices; the extreme points
    chosen (lexicographically smallest of each extreme row) are hull vertices
    either way.  ``k`` defaults to the run length of row 0 starting at x=0,
    which needs the whole set.
    """
    pts = list(s1)
    if not pts:
        raise EmptySetError("empty set")
    if k is None:
        k = _diameter_count(pts)
    top, bottom = _extremes(pts)
    if -bottom[1] > top[1]:
        top, bottom = _extremes([VERTICAL_FLIP(p) for p in pts])
        return QuadDecomposition(k, top, bottom, VERTICAL_FLIP)
    return QuadDecomposition(k, top, bottom, IDENTITY)


def center_top_shear(q: QuadDecomposition) -> AffineMap:
    """Horizontal shear moving the top point as close as possible above x_mid."""
    xt, b = q.top
    if b <= 0:
        raise DegenerateTopError("the top point lies on the diameter row")
    target = q.k - 1  # 2 * x_mid
    # minimise |2*(xt + s*b) - target| over integers s
    num, den = target - 2 * xt, 2 * b
    lo = num // den
    best = None
    for s in (lo, lo + 1):
        key = (abs(2 * (xt + s * b) - target), abs(s), s)
        if best is None or key < best[0]:
            best = (key, s)
    return horizontal_shear(best[1])


def detect_pompom(q: QuadDecomposition) -> bool:
    """True iff the centred upper part is the triangle (0,0), (k-1,0), (-1,k+1)."""
    k = q.k
    if q.top != (-1, k + 1):
        return False
    expected = lattice_points_in_polygon(convex_hull({(0, 0), (k - 1, 0), (-1, k + 1)}))
    if q.upper != expected:
        log.error("top at (-1, k+1) but the upper part is not the full triangle")
        return False
    return True


def pompom_transform() -> AffineMap:
    """Vertical shear taking the diameter onto the diagonal y = x."""
    return vertical_shear(1)


def pompom_bottom_guard(q: QuadDecomposition, bot: Point) -> None:
    if not 0 <= bot[0] <= q.k - 1:
        raise InvariantViolation(
            f"bottom point {bot} outside the diameter's columns in the pompom case"
        )


def lemma2_region(l: int, p: Point) -> bool:
    """Lower triangle (0,0), (l,0), p is almost 4-connected when -x/2 <= y <= l - x."""
    x, y = p
    if not (l > 1 and y < 0 and x > l):
        raise PreconditionViolation(f"needs l > 1, y < 0, x > l; got l={l}, p={p}")
    return -x <= 2 * y and y <= l - x


def lemma3_region(l: int, p: Point) -> bool:
    """Lower triangle (0,0), (l,0), p is almost 4-connected when y <= 2l - 2x."""
    x, y = p
    if not (l > 1 and -l < y < 0 and x > l):
        raise PreconditionViolation(f"needs l > 1, -l < y < 0, x > l; got l={l}, p={p}")
    return y <= 2 * l - 2 * x


def in_wedge(l: int, p: Point) -> bool:
    """Open wedge below y = -x/2 and above y = 2l - 2x."""
    x, y = p
    return 2 * y < -x and y > 2 * l - 2 * x


def _right_shear_candidates(k: int, top: Point, bot: Point) -> list[int]:
    # bot = (k + lam, y) with y < 0 sits between the lines through (k,0) of
    # slopes -1/m and -1/(m+1), where m < lam/|y| <= m+1
    lam, depth = bot[0] - k, -bot[1]
    m = -(-lam // depth) - 1
    return [m - 1, m, m + 1]


def connect_bottom(q: QuadDecomposition) -> tuple[list, str]:
    """Horizontal shear steps making the quadrilateral almost 4-connected.

    ``q`` must have its top point above the diameter's columns.  Returns the
    named steps and the case label.  The left-hand situation is mirrored
    first.  Bottoms to the right of y = k-1-x are pulled back with the shear
    sending the line through (k,0) and the bottom close to x = k; bottoms in
    the residual wedge are handled by the shear sending y = k-1-x to x = k-1.
    """
    k, l = q.k, q.k - 1
    top, bot = q.top, q.bottom
    if not (0 <= top[0] <= l):
        raise PreconditionViolation(f"top {top} is not above the diameter")
    steps = []
    if bot[1] == 0 or 0 <= bot[0] <= l:
        return steps, TOP_CENTERED
    label = TOP_CENTERED
    if bot[0] < 0:
        r = mirror(k)
        steps.append(("mirror_bottom", r))
        top, bot = r(top), r(bot)
    if bot[0] + bot[1] >= k:
        chosen = None
        for s in _right_shear_candidates(k, top, bot):
            a = top[0] + s * top[1]
            xb = bot[0] + s * bot[1]
            if 0 <= a <= l and xb + bot[1] <= l:
                chosen = s
                break
        if chosen is None:
            raise InvariantViolation(f"no bottom shear keeps top {top} in band for bottom {bot}")
        shear = horizontal_shear(chosen)
        steps.append(("bottom_right_shear", shear))
        top, bot = shear(top), shear(bot)
        label = BOTTOM_RIGHT_SHEAR
    if bot[0] > l and in_wedge(l, bot):
        if top[0] + top[1] <= l:
            shear = horizontal_shear(1)
            steps.append(("wedge_case1_shear", shear))
            label = WEDGE_CASE1
        elif top[1] >= top[0]:
            raise InvariantViolation(f"bottom {bot} in the wedge with top {top} above y=x and y=k-1-x")
        else:
            raise InvariantViolation(f"bottom {bot} in the wedge with top {top} below y=x")
    return steps, label


def _row_of(hull: Hull, y: int):
    for row, x0, x1 in row_spans(hull):
        if row == y:
            return x0, x1
    return None


def finalize_general(hull2: Hull, k: int, bot2: Point) -> AffineMap:
    """Last horizontal shear for the full set once the quadrilateral is almost 4-connected.

    ``hull2`` is the hull of the full image S'' and ``bot2`` the image of the
    bottom point.  Identity if S'' is already almost 4-connected; otherwise
    the bottom row must extend to the right of bot2 with bot2 + (1,0) on
    y = k - x, and the shear sending that line to x = k closes the gap.
    """
    if classify_convex(hull2).almost4:
        return IDENTITY
    pa = (bot2[0] + 1, bot2[1])
    row = _row_of(hull2, pa[1])
    if row is None or not row[0] <= pa[0] <= row[1]:
        raise FallbackEngaged(f"gap on the bottom row but {pa} is not in the set")
    if pa[0] + pa[1] != k:
        raise FallbackEngaged(f"{pa} is not on y = k - x")
    shear = horizontal_shear(1)
    if not classify_convex(map_hull(shear, hull2)).almost4:
        raise FallbackEngaged("general-case shear did not connect the set")
    return shear


def _param_order(budget: int):
    yield 0
    for v in range(1, budget + 1):
        yield v
        yield -v


def fallback_shear_search(s: Iterable[Point], budget: int) -> AffineMap:
    """Deterministic search over shear compositions for an almost 4-connected image.

    Tries, for each of the identity and the reflection x -> -x applied first:
    single horizontal or vertical shears, then horizontal-after-vertical and
    vertical-after-horizontal pairs, parameters ordered 0, 1, -1, 2, -2, ...
    up to ``budget``.
    """
    s = s if isinstance(s, (set, frozenset)) else frozenset(s)
    if not s:
        raise EmptySetError("empty set")
    hull = convex_hull(s)
    convex = count_lattice_points(hull) == len(s)

    def good(m):
        if convex:
            return classify_convex(map_hull(m, hull)).almost4
        return classify(apply_map(m, s)).almost4

    params = list(_param_order(budget))
    for r in (IDENTITY, AffineMap(-1, 0, 0, 1)):
        for p in params:
            for m in (horizontal_shear(p), vertical_shear(p)):
                cand = compose(m, r)
                if good(cand):
                    return cand
        for p in params[1:]:
            for t in params[1:]:
                for cand in (
                    compose(horizontal_shear(p), compose(vertical_shear(t), r)),
                    compose(vertical_shear(t), compose(horizontal_shear(p), r)),
                ):
                    if good(cand):
                        return cand
    raise NormalizationFailed(f"no almost 4-connected image within shear budget {budget}")


# ---------------------------------------------------------------------------
# Pipeline


def _outcome(c: ConnectivityClass) -> str:
    return c.tag.value


def to_almost_4_connected(
    s: Iterable[Point],
    *,
    check: bool = True,
    budget: Optional[int] = None,
    diameter: Optional[DiameterResult] = None,
) -> tuple[AffineMap, frozenset, NormalizationTrace]:
    """Unimodular affine map taking a digital convex set to an almost 4-connected one.

    Returns the total map, the image set and the step trace.  ``diameter``
    pins the lattice diameter the construction starts from (it must be one);
    by default the fast search picks it.
    """
    s = s if isinstance(s, (set, frozenset)) else frozenset(s)
    if not s:
        raise EmptySetError("empty set")
    hull = convex_hull(s)
    if check and count_lattice_points(hull) != len(s):
        raise NotDigitalConvexError("input is not digital convex")

    trace = NormalizationTrace()
    d = diameter if diameter is not None else lattice_diameter_fast(s, hull)[0]
    if len(hull) <= 2:
        m0 = _diameter_map(d)
        trace.add("diameter_to_horizontal", m0, Connectivity.CONNECTED4.value)
        total = trace.total()
        return total, apply_map(total, s), trace

    m0 = _diameter_map(d)
    hull1 = map_hull(m0, hull)
    trace.add("diameter_to_horizontal", m0)
    try:
        _construct(hull1, d.k, trace)
    except (InvariantViolation, FallbackEngaged, PreconditionViolation) as exc:
        log.warning("construction check failed (%s); running shear search", exc)
        kept = trace.steps[:1]
        trace.steps = kept
        start = map_hull(m0, hull)
        search = fallback_shear_search(
            lattice_points_in_polygon(start), 2 * d.k if budget is None else budget
        )
        trace.add("fallback_search", search, classify_convex(map_hull(search, start)).tag.value)
        trace.case_label = FALLBACK_SEARCH
        trace.fallback_used = True
    total = trace.total()
    final = classify_convex(map_hull(total, hull))
    if not final.almost4:
        exc = NormalizationFailed(f"result classified {final.tag.value}")
        exc.trace = trace
        raise exc
    return total, apply_map(total, s), trace


def _construct(hull1: Hull, k: int, trace: NormalizationTrace) -> None:
    """Append the construction steps for a set already in diameter frame."""
    q = orient_and_decompose(hull1, k)
    if not q.orientation.is_identity():
        trace.add("orient_flip", q.orientation)
    current = compose(q.orientation, IDENTITY)
    labels = []

    shear = center_top_shear(q)
    q = q.mapped(shear)
    current = compose(shear, current)
    if not shear.is_identity():
        labels.append(TOP_CENTERED)
    trace.add("center_top", shear)
    if 2 * q.top[0] > k - 1:
        r = mirror(k)
        q = q.mapped(r)
        current = compose(r, current)
        trace.add("mirror_top", r)
    upper_class = classify_convex(convex_hull({(0, 0), (k - 1, 0), q.top}))
    trace.steps[-1] = TraceStep(trace.steps[-1].name, trace.steps[-1].map, _outcome(upper_class))
    trace.top_prime = q.top
    trace.bot_prime = q.bottom

    if not 0 <= q.top[0] <= k - 1:
        if not detect_pompom(q):
            raise InvariantViolation(f"top {q.top} outside the band but not the pompom apex")
        pompom_bottom_guard(q, q.bottom)
        vs = pompom_transform()
        image = map_hull(vs, q.hull)
        trace.add("pompom_vertical_shear", vs, _outcome(classify_convex(image)))
        trace.case_label = POMPOM
        full = map_hull(compose(vs, current), hull1)
        if not classify_convex(full).almost4:
            raise FallbackEngaged("pompom image of the full set is not almost 4-connected")
        return

    steps, label = connect_bottom(q)
    bottom_map = IDENTITY
    for name, m in steps:
        bottom_map = compose(m, bottom_map)
    quad_image = map_hull(bottom_map, q.hull)
    quad_class = classify_convex(quad_image)
    for i, (name, m) in enumerate(steps):
        trace.add(name, m, _outcome(quad_class) if i == len(steps) - 1 else "n/a")
    if not quad_class.almost4:
        raise FallbackEngaged(f"quadrilateral image classified {quad_class.tag.value}")
    if label != TOP_CENTERED:
        labels.append(label)
    current = compose(bottom_map, current)

    full = map_hull(current, hull1)
    bot2 = bottom_map(q.bottom)
    fix = finalize_general(full, k, bot2)
    if not fix.is_identity():
        trace.add("general_fix_shear", fix, _outcome(classify_convex(map_hull(fix, full))))
        labels.append(GENERAL_FIX)
    trace.case_label = labels[-1] if labels else DIRECT4
