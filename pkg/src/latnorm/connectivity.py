"""4-/8-connectivity of lattice point sets and the almost-4-connected class.

Points are grouped into maximal horizontal runs; two runs on adjacent rows
are 4-adjacent when their x-ranges overlap and 8-adjacent when they overlap
after widening by one.  A union-find over runs then yields the components,
which keeps digital convex inputs (one run per row) close to O(rows).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import EmptySetError
from .lattice import Hull, Point, row_spans


class Connectivity(enum.Enum):
    CONNECTED4 = "connected4"
    ALMOST4 = "almost4"
    CONNECTED8_ONLY = "connected8_only"
    DISCONNECTED = "disconnected"

    @property
    def strength(self) -> int:
        return _STRENGTH[self]

    def at_least(self, other: "Connectivity") -> bool:
        return self.strength >= other.strength


_STRENGTH = {
    Connectivity.CONNECTED4: 3,
    Connectivity.ALMOST4: 2,
    Connectivity.CONNECTED8_ONLY: 1,
    Connectivity.DISCONNECTED: 0,
}


@dataclass(frozen=True)
class ConnectivityClass:
    tag: Connectivity
    witness: Optional[Point] = None

    def __post_init__(self):
        if (self.witness is not None) != (self.tag is Connectivity.ALMOST4):
            raise ValueError("a witness is present exactly for ALMOST4")

    @property
    def almost4(self) -> bool:
        """True for both CONNECTED4 and ALMOST4."""
        return self.tag.at_least(Connectivity.ALMOST4)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            if ri < rj:
                self.parent[rj] = ri
            else:
                self.parent[ri] = rj


def point_runs(s: Iterable[Point]) -> list[tuple[int, int, int]]:
    """Maximal horizontal runs ``(y, x0, x1)`` sorted by row then x."""
    rows: dict[int, list[int]] = {}
    for x, y in s:
        rows.setdefault(y, []).append(x)
    runs = []
    for y in sorted(rows):
        xs = sorted(rows[y])
        start = prev = xs[0]
        for x in xs[1:]:
            if x != prev + 1:
                runs.append((y, start, prev))
                start = x
            prev = x
        runs.append((y, start, prev))
    return runs


def _run_components(runs, slack: int) -> list[list[int]]:
    """Group run indices into components; ``slack`` 0 is 4-adjacency, 1 is 8."""
    uf = _UnionFind(len(runs))
    # runs are sorted by (y, x0); locate the row boundaries
    starts = [0]
    for i in range(1, len(runs)):
        if runs[i][0] != runs[i - 1][0]:
            starts.append(i)
    starts.append(len(runs))
    for r in range(len(starts) - 2):
        a0, a1, b1 = starts[r], starts[r + 1], starts[r + 2]
        if runs[a1][0] != runs[a0][0] + 1:
            continue
        i, j = a0, a1
        while i < a1 and j < b1:
            _, p0, p1 = runs[i]
            _, q0, q1 = runs[j]
            p1 += slack
            q1 += slack
            if p0 <= q1 and q0 <= p1:
                uf.union(i, j)
            if p1 < q1:
                i += 1
            elif q1 < p1:
                j += 1
            else:
                i += 1
                j += 1
    groups: dict[int, list[int]] = {}
    for i in range(len(runs)):
        groups.setdefault(uf.find(i), []).append(i)
    return list(groups.values())


def classify_runs(runs) -> ConnectivityClass:
    """Classify a set given as its sorted maximal row runs."""
    if not runs:
        raise EmptySetError("connectivity of an empty set")
    comps4 = _run_components(runs, 0)
    if len(comps4) == 1:
        return ConnectivityClass(Connectivity.CONNECTED4)
    connected8 = len(_run_components(runs, 1)) == 1
    if connected8 and len(comps4) == 2:
        # removing a point can only reconnect the rest if that point is a
        # whole component; the 8-connected union then makes it adjacent
        singles = []
        for comp in comps4:
            if len(comp) == 1:
                y, x0, x1 = runs[comp[0]]
                if x0 == x1:
                    singles.append((x0, y))
        if singles:
            return ConnectivityClass(Connectivity.ALMOST4, min(singles))
    if connected8:
        return ConnectivityClass(Connectivity.CONNECTED8_ONLY)
    return ConnectivityClass(Connectivity.DISCONNECTED)


def classify(s: Iterable[Point]) -> ConnectivityClass:
    """Strongest class of s; the ALMOST4 witness is the lexicographically
    smallest point whose removal leaves a 4-connected set."""
    return classify_runs(point_runs(s))


def classify_convex(hull: Hull) -> ConnectivityClass:
    """Classify the lattice points of a hull polygon (a digital convex set)
    straight from its row spans, without enumerating points."""
    return classify_runs(row_spans(hull))


def is_4_connected(s: Iterable[Point]) -> bool:
    runs = point_runs(s)
    if not runs:
        raise EmptySetError("connectivity of an empty set")
    return len(_run_components(runs, 0)) == 1


def is_8_connected(s: Iterable[Point]) -> bool:
    runs = point_runs(s)
    if not runs:
        raise EmptySetError("connectivity of an empty set")
    return len(_run_components(runs, 1)) == 1
