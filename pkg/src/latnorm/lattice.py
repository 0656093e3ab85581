"""Exact lattice primitives: points, unimodular affine maps, hulls, row spans.

Points are plain ``(x, y)`` integer tuples and point sets are frozensets of
them.  Nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, NamedTuple

from .errors import CoordinateOverflow, EmptySetError, NotPrimitiveError, ZeroVectorError

Point = tuple[int, int]
PointSet = frozenset
Hull = tuple

INPUT_BOUND = 2**31
INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def _check64(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise CoordinateOverflow(f"{value} does not fit in 64 bits")
    return value


def as_point_set(points: Iterable) -> frozenset:
    """Validate an iterable of coordinate pairs and freeze it into a point set."""
    out = set()
    for p in points:
        x, y = p
        if not (isinstance(x, int) and isinstance(y, int)):
            raise TypeError(f"non-integer point {p!r}")
        if abs(x) > INPUT_BOUND or abs(y) > INPUT_BOUND:
            raise CoordinateOverflow(f"point {p!r} exceeds the input bound 2**31")
        out.add((int(x), int(y)))
    return frozenset(out)


def _as_set(s) -> frozenset:
    return s if isinstance(s, (set, frozenset)) else frozenset(s)


# ---------------------------------------------------------------------------
# Affine unimodular maps


@dataclass(frozen=True)
class AffineMap:
    """``p -> [[a, b], [c, d]] @ p + (tx, ty)`` with determinant +1 or -1."""

    a: int = 1
    b: int = 0
    c: int = 0
    d: int = 1
    tx: int = 0
    ty: int = 0

    def __post_init__(self):
        for v in (self.a, self.b, self.c, self.d, self.tx, self.ty):
            if not isinstance(v, int):
                raise TypeError(f"map entries must be integers, got {v!r}")
            _check64(v)
        if self.det not in (1, -1):
            raise ValueError(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> tuple:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def translation(self) -> tuple:
        return (self.tx, self.ty)

    def is_identity(self) -> bool:
        return self == IDENTITY

    def __call__(self, p: Point) -> Point:
        x, y = p
        return (
            _check64(self.a * x + self.b * y + self.tx),
            _check64(self.c * x + self.d * y + self.ty),
        )

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        return compose(self, other)

    def __repr__(self):
        return (
            f"AffineMap([[{self.a}, {self.b}], [{self.c}, {self.d}]], "
            f"t=({self.tx}, {self.ty}))"
        )


IDENTITY = AffineMap()


def compose(m1: AffineMap, m2: AffineMap) -> AffineMap:
    """The map that applies ``m2`` first and then ``m1``."""
    return AffineMap(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
        m1.a * m2.tx + m1.b * m2.ty + m1.tx,
        m1.c * m2.tx + m1.d * m2.ty + m1.ty,
    )


def compose_all(maps: Iterable[AffineMap]) -> AffineMap:
    """Compose maps given in application order (first applied first)."""
    total = IDENTITY
    for m in maps:
        total = compose(m, total)
    return total


def invert(m: AffineMap) -> AffineMap:
    det = m.det
    # the inverse of a unimodular matrix is its adjugate times det (det = 1/det)
    a, b, c, d = m.d * det, -m.b * det, -m.c * det, m.a * det
    return AffineMap(a, b, c, d, -(a * m.tx + b * m.ty), -(c * m.tx + d * m.ty))


def translation(tx: int, ty: int) -> AffineMap:
    return AffineMap(1, 0, 0, 1, tx, ty)


def horizontal_shear(s: int) -> AffineMap:
    """``(x, y) -> (x + s*y, y)``."""
    return AffineMap(1, s, 0, 1)


def vertical_shear(s: int) -> AffineMap:
    """``(x, y) -> (x, y + s*x)``."""
    return AffineMap(1, 0, s, 1)


def apply_map(m: AffineMap, s: Iterable[Point]) -> frozenset:
    a, b, c, d, tx, ty = m.a, m.b, m.c, m.d, m.tx, m.ty
    image = frozenset([(a * x + b * y + tx, c * x + d * y + ty) for x, y in s])
    if image:
        xs = [p[0] for p in image]
        ys = [p[1] for p in image]
        for v in (min(xs), max(xs), min(ys), max(ys)):
            _check64(v)
    return image


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, p, q)`` with ``p*a + q*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_p, p = 1, 0
    old_q, q = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_p, p = p, old_p - quo * p
        old_q, q = q, old_q - quo * q
    if old_r < 0:
        old_r, old_p, old_q = -old_r, -old_p, -old_q
    return old_r, old_p, old_q


def primitive_direction_map(v: tuple[int, int]) -> AffineMap:
    """Linear map with determinant +1 sending the primitive vector ``v`` to (1, 0).

    The first row ``(p, q)`` solves ``p*vx + q*vy = 1`` and is normalised so
    that ``|q|`` is minimal (``|p|`` when ``vx == 0``); the second row is
    ``(-vy, vx)``.  Costs one extended gcd, O(log max(|vx|, |vy|)).
    """
    vx, vy = v
    if vx == 0 and vy == 0:
        raise ZeroVectorError("zero direction vector")
    g, p, q = egcd(vx, vy)
    if g != 1:
        raise NotPrimitiveError(f"{v} is not primitive (gcd {g})")
    # solutions are (p + j*vy, q - j*vx)
    if vx != 0:
        j = _nearest_quotient(q, vx)
        p, q = p + j * vy, q - j * vx
    else:
        j = _nearest_quotient(p, -vy)
        p, q = p + j * vy, q - j * vx
    return AffineMap(p, q, -vy, vx)


def _nearest_quotient(num: int, den: int) -> int:
    """Integer j minimising ``|num - j*den|``; ties resolved towards a non-negative remainder."""
    j = num // den
    r = num - j * den
    if 2 * abs(r) > abs(den) or (2 * abs(r) == abs(den) and r < 0):
        j += 1 if (r > 0) == (den > 0) else -1
    return j


# ---------------------------------------------------------------------------
# Counting


class PickCounts(NamedTuple):
    twice_area: int
    boundary: int
    interior: int


def segment_lattice_count(p: Point, q: Point) -> int:
    return gcd(q[0] - p[0], q[1] - p[1]) + 1


def cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def pick_counts(p: Point, q: Point, r: Point) -> PickCounts:
    """Twice the area, boundary and interior lattice counts of triangle pqr.

    For a degenerate triangle the boundary is the lattice points of the
    covering segment and the interior is 0; Pick's identity then does not hold.
    """
    a2 = abs(cross(p, q, r))
    if a2 == 0:
        ends = sorted((p, q, r))
        return PickCounts(0, segment_lattice_count(ends[0], ends[-1]), 0)
    b = gcd(q[0] - p[0], q[1] - p[1]) + gcd(r[0] - q[0], r[1] - q[1]) + gcd(p[0] - r[0], p[1] - r[1])
    return PickCounts(a2, b, (a2 - b + 2) // 2)


# ---------------------------------------------------------------------------
# Hulls and polygon scanlines


def _row_extremes(s) -> list[Point]:
    lo: dict[int, int] = {}
    hi: dict[int, int] = {}
    for x, y in s:
        cur = lo.get(y)
        if cur is None:
            lo[y] = hi[y] = x
        elif x < cur:
            lo[y] = x
        elif x > hi[y]:
            hi[y] = x
    pts = [(x, y) for y, x in lo.items()]
    pts.extend((x, y) for y, x in hi.items() if x != lo[y])
    return pts


def convex_hull(s: Iterable[Point]) -> Hull:
    """Counter-clockwise hull vertices, no three consecutive collinear.

    Starts from the lexicographically smallest vertex.  A single point gives a
    1-tuple and a collinear set gives its two endpoints.  Only the leftmost and
    rightmost point of every row can be a vertex, so the monotone chain runs
    on those.
    """
    pts = sorted(_row_extremes(s))
    if not pts:
        raise EmptySetError("convex hull of an empty set")
    if len(pts) <= 2:
        return tuple(pts) if len(pts) == 1 or pts[0] != pts[1] else (pts[0],)

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return tuple(hull)


def signed_area2(poly) -> int:
    n = len(poly)
    return sum(
        poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]
        for i in range(n)
    )


def map_hull(m: AffineMap, hull: Hull) -> Hull:
    """Image of a hull polygon, re-oriented counter-clockwise."""
    image = tuple(m(p) for p in hull)
    if m.det < 0 and len(image) > 2:
        image = image[::-1]
    return image


def row_spans(hull: Hull) -> list[tuple[int, int, int]]:
    """Lattice row intervals ``(y, xmin, xmax)`` of a hull polygon, bottom to top.

    Left-chain crossings are rounded up and right-chain crossings down, so
    each interval is exactly the lattice points of that row inside the
    polygon.  Rows containing no lattice point are omitted.
    """
    if len(hull) == 1:
        (x, y), = hull
        return [(y, x, x)]
    if len(hull) > 2 and signed_area2(hull) < 0:
        hull = hull[::-1]
    ymin = min(p[1] for p in hull)
    ymax = max(p[1] for p in hull)
    rows = ymax - ymin + 1
    lo = [None] * rows
    hi = [None] * rows
    n = len(hull)
    for i in range(n):
        (px, py), (qx, qy) = hull[i], hull[(i + 1) % n]
        dy = qy - py
        if dy == 0:
            j = py - ymin
            a, b = (px, qx) if px <= qx else (qx, px)
            lo[j] = a if lo[j] is None else min(lo[j], a)
            hi[j] = b if hi[j] is None else max(hi[j], b)
            continue
        dx = qx - px
        if dy > 0:
            # upward edge of a CCW polygon: right boundary
            for y in range(py, qy + 1):
                x = (px * dy + (y - py) * dx) // dy
                j = y - ymin
                hi[j] = x if hi[j] is None else max(hi[j], x)
        else:
            for y in range(qy, py + 1):
                x = -((-(px * dy + (y - py) * dx)) // dy)
                j = y - ymin
                lo[j] = x if lo[j] is None else min(lo[j], x)
    return [
        (ymin + j, lo[j], hi[j])
        for j in range(rows)
        if lo[j] is not None and hi[j] is not None and lo[j] <= hi[j]
    ]


def lattice_points_in_polygon(hull: Hull) -> frozenset:
    return frozenset(
        (x, y) for y, x0, x1 in row_spans(hull) for x in range(x0, x1 + 1)
    )


def count_lattice_points(hull: Hull) -> int:
    return sum(x1 - x0 + 1 for _, x0, x1 in row_spans(hull))


def is_digital_convex(s: Iterable[Point]) -> bool:
    """True iff the lattice points of conv(s) are exactly s.

    s is always contained in the lattice points of its hull, so comparing
    the two cardinalities decides equality.
    """
    s = _as_set(s)
    if not s:
        raise EmptySetError("digital convexity of an empty set")
    return count_lattice_points(convex_hull(s)) == len(s)
