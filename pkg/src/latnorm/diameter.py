"""Lattice diameter: the largest number of collinear lattice points in conv(S).

The fast search only tries segments starting at hull vertices.  For every
vertex it walks the fan of triangles formed with the opposite hull edges,
maps each edge onto the x-axis with a unimodular map and looks for the
highest lattice point below the apex; rows too far below the apex to beat
the current bound are never scanned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterable, Optional

import numpy as np

from .errors import EmptySetError, InvariantViolation, NotDigitalConvexError
from .lattice import (
    AffineMap,
    Hull,
    Point,
    compose,
    convex_hull,
    invert,
    is_digital_convex,
    pick_counts,
    primitive_direction_map,
    segment_lattice_count,
    translation,
)


@dataclass(frozen=True)
class DiameterResult:
    p_start: Point
    p_end: Point
    direction: tuple[int, int]
    k: int

    def points(self) -> list[Point]:
        (x, y), (dx, dy) = self.p_start, self.direction
        return [(x + i * dx, y + i * dy) for i in range(self.k)]


@dataclass
class DiameterSearchStats:
    triangles_scanned: int = 0
    rows_scanned: int = 0
    pruned_by_bound: int = 0
    lower_bound: int = 1
    triangle_points: list = field(default_factory=list)

    def row_budget(self) -> int:
        """Upper bound on ``rows_scanned`` implied by the pruning rule.

        A fan triangle holding n_i lattice points has apex height below
        2*n_i, and with threshold lam at most ceil(height / (lam - 1)) rows
        are read.  The threshold only grows during a search, so the static
        lower bound gives a valid budget.
        """
        lam = self.lower_bound
        if lam >= 2:
            return sum(-(-2 * n // (lam - 1)) for n in self.triangle_points) + self.triangles_scanned
        return sum(2 * n for n in self.triangle_points) + self.triangles_scanned


def diameter_lower_bound(n: int) -> int:
    """ceil(sqrt(n) / 8), a guaranteed lower bound on the diameter count."""
    if n < 1:
        raise ValueError("n must be positive")
    root = isqrt(n - 1) + 1  # ceil(sqrt(n))
    return -(-root // 8)


def _canonical(p: Point, q: Point, k: int) -> DiameterResult:
    if q < p:
        p, q = q, p
    if k == 1:
        return DiameterResult(p, q, (0, 0), 1)
    step = k - 1
    return DiameterResult(p, q, ((q[0] - p[0]) // step, (q[1] - p[1]) // step), k)


def _better(cand: DiameterResult, best: Optional[DiameterResult]) -> bool:
    if best is None or cand.k > best.k:
        return True
    return cand.k == best.k and (cand.p_start, cand.direction) < (best.p_start, best.direction)


def _row_interval(apex_x: int, apex_y: int, base: int, y: int):
    """Lattice x-range of row y in the triangle (0,0), (base,0), apex."""
    left = apex_x * y
    right = base * apex_y + (apex_x - base) * y
    if left > right:
        left, right = right, left
    lo = -((-left) // apex_y)
    hi = right // apex_y
    return lo, hi


def topmost_lattice_point_in_triangle(
    base: int, apex: Point, stop_depth: Optional[int] = None
) -> Optional[Point]:
    """Highest lattice point other than the apex in the triangle (0,0), (base,0), apex.

    Rows are scanned downwards from ``apex_y - 1``; at most ``stop_depth``
    rows are read (``None`` means unlimited).  Returns None when the scan is
    cut off, or when the apex sits on the base line.  Within a row the
    leftmost lattice point is returned.
    """
    point, _ = _scan(base, apex, stop_depth)
    return point


def _scan(base: int, apex: Point, stop_depth: Optional[int]):
    ax, ay = apex
    if ay <= 0:
        return None, 0
    last = 0 if stop_depth is None else max(0, ay - stop_depth)
    rows = 0
    for y in range(ay - 1, last - 1, -1):
        rows += 1
        lo, hi = _row_interval(ax, ay, base, y)
        if lo <= hi:
            return (lo, y), rows
    return None, rows


def _degenerate(hull: Hull, n: int) -> Optional[DiameterResult]:
    if len(hull) == 1:
        return DiameterResult(hull[0], hull[0], (0, 0), 1)
    if len(hull) == 2:
        return _canonical(hull[0], hull[1], segment_lattice_count(hull[0], hull[1]))
    return None


def lattice_diameter_fast(
    s: Iterable[Point],
    hull: Optional[Hull] = None,
    *,
    prune: bool = True,
    check: bool = False,
) -> tuple[DiameterResult, DiameterSearchStats]:
    """Lattice diameter of a digital convex set via hull-vertex fans.

    ``check=True`` verifies digital convexity first.  With ``prune=False``
    every fan triangle is scanned down to its topmost point (used to show
    that pruning never changes the answer).
    """
    s = s if isinstance(s, (set, frozenset)) else frozenset(s)
    if not s:
        raise EmptySetError("diameter of an empty set")
    if check and not is_digital_convex(s):
        raise NotDigitalConvexError("input is not digital convex")
    if hull is None:
        hull = convex_hull(s)
    n = len(s)
    stats = DiameterSearchStats(lower_bound=diameter_lower_bound(n))
    easy = _degenerate(hull, n)
    if easy is not None:
        return easy, stats

    h = len(hull)
    # one unimodular frame per hull edge: edge j -> segment (0,0)-(g_j,0)
    frames = []
    for j in range(h):
        p, q = hull[j], hull[(j + 1) % h]
        g = gcd(q[0] - p[0], q[1] - p[1])
        rot = primitive_direction_map(((q[0] - p[0]) // g, (q[1] - p[1]) // g))
        frames.append((compose(rot, translation(-p[0], -p[1])), g))

    best: Optional[DiameterResult] = None
    best_k = 0
    for i in range(h):
        v = hull[i]
        for j in range(h):
            if j == i or (j + 1) % h == i:
                continue
            frame, g = frames[j]
            ax, ay = frame(v)
            if ay < 0:
                # only reachable for clockwise input; flip to keep one code path
                frame = compose(AffineMap(1, 0, 0, -1), frame)
                ax, ay = frame(v)
            stats.triangles_scanned += 1
            stats.triangle_points.append(_triangle_lattice_size(g, (ax, ay)))
            lam = max(stats.lower_bound, best_k)
            stop = -(-ay // (lam - 1)) if (prune and lam > 1) else None
            top, rows = _scan(g, (ax, ay), stop)
            stats.rows_scanned += rows
            if top is None:
                stats.pruned_by_bound += 1
                continue
            drop = ay - top[1]
            count = ay // drop + 1
            if count < lam:
                continue
            end = (ax + (count - 1) * (top[0] - ax), ay - (count - 1) * drop)
            cand = _canonical(v, invert(frame)(end), count)
            if _better(cand, best):
                best = cand
                best_k = cand.k
    if best is None:
        raise InvariantViolation(f"every fan triangle fell below the bound {stats.lower_bound}")
    return best, stats


def _triangle_lattice_size(base: int, apex: Point) -> int:
    # lattice points of the closed triangle from Pick: i + b = (A2 + b + 2) / 2
    a2, b, _ = pick_counts((0, 0), (base, 0), apex)
    return (a2 + b + 2) // 2


def lattice_diameter_bruteforce(s: Iterable[Point]) -> DiameterResult:
    """Maximise gcd(|dx|, |dy|) + 1 over every pair of points.

    Independent of the hull machinery; intended for n up to a few thousand.
    The winning segment's lattice points are all checked for membership.
    """
    s = s if isinstance(s, (set, frozenset)) else frozenset(s)
    if not s:
        raise EmptySetError("diameter of an empty set")
    if not is_digital_convex(s):
        raise NotDigitalConvexError("input is not digital convex")
    pts = np.array(sorted(s), dtype=np.int64)
    n = len(pts)
    if n == 1:
        p = tuple(int(v) for v in pts[0])
        return DiameterResult(p, p, (0, 0), 1)
    best_g = 0
    winners = []
    chunk = max(1, 4_000_000 // n)
    for start in range(0, n, chunk):
        block = pts[start:start + chunk]
        diff = np.abs(block[:, None, :] - pts[None, :, :])
        g = np.gcd(diff[..., 0], diff[..., 1])
        top = int(g.max())
        if top > best_g:
            best_g, winners = top, []
        if top == best_g:
            rows, cols = np.nonzero(g == best_g)
            winners.extend(zip((rows + start).tolist(), cols.tolist()))
    best = None
    for i, j in winners:
        cand = _canonical(tuple(map(int, pts[i])), tuple(map(int, pts[j])), best_g + 1)
        if _better(cand, best):
            best = cand
    missing = [p for p in best.points() if p not in s]
    if missing:
        raise NotDigitalConvexError(f"segment points {missing} not in the set")
    return best
