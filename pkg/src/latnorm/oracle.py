"""Brute-force references used to check the fast paths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .connectivity import Connectivity, ConnectivityClass, classify
from .diameter import lattice_diameter_fast
from .lattice import AffineMap, Point, is_digital_convex


def _connected(points: frozenset, radius2: int) -> bool:
    """Graph connectivity with edges between points at squared distance <= radius2."""
    if not points:
        return True
    pts = list(points)
    seen = {pts[0]}
    queue = deque([pts[0]])
    while queue:
        p = queue.popleft()
        for q in pts:
            if q not in seen and (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 <= radius2:
                seen.add(q)
                queue.append(q)
    return len(seen) == len(pts)


def classify_bruteforce(s: Iterable[Point]) -> ConnectivityClass:
    """Connectivity class straight from the definitions, O(n^3).

    4-adjacency is Euclidean distance <= 1 and 8-adjacency distance <= sqrt(2).
    Almost 4-connected: removing one point leaves a non-empty 4-connected set
    to which that point is 8-adjacent.
    """
    s = frozenset(s)
    if not s:
        raise ValueError("empty set")
    if _connected(s, 1):
        return ConnectivityClass(Connectivity.CONNECTED4)
    for p in sorted(s):
        rest = s - {p}
        if rest and _connected(rest, 1) and any(
            (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 <= 2 for q in rest
        ):
            return ConnectivityClass(Connectivity.ALMOST4, p)
    if _connected(s, 2):
        return ConnectivityClass(Connectivity.CONNECTED8_ONLY)
    return ConnectivityClass(Connectivity.DISCONNECTED)


@dataclass(frozen=True)
class SearchBudget:
    max_entry: int = 8
    max_translation: int = 0

    def __post_init__(self):
        if self.max_entry < 1:
            raise ValueError("max_entry must be at least 1")


def exhaustive_unimodular_search(
    s: Iterable[Point], target: Connectivity, budget: SearchBudget = SearchBudget()
) -> Optional[AffineMap]:
    """First map (entries in [-B, B], det +-1) whose image is at least as connected as target.

    Matrices are enumerated with (a, b, c, d) in lexicographic order; the
    translation moves the image's lower-left bounding corner to the origin.
    Connectivity is translation invariant, so nothing is lost by fixing it.
    """
    s = frozenset(s)
    bound = budget.max_entry
    rng = range(-bound, bound + 1)
    pts = sorted(s)
    for a, b, c, d in product(rng, repeat=4):
        if a * d - b * c not in (1, -1):
            continue
        image = [(a * x + b * y, c * x + d * y) for x, y in pts]
        if classify_bruteforce(image).tag.at_least(target):
            tx = -min(p[0] for p in image)
            ty = -min(p[1] for p in image)
            return AffineMap(a, b, c, d, tx, ty)
    return None


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]

    def __str__(self):
        return "\n".join(
            f"{'PASS' if passed else 'FAIL'} {name}" + (f": {self.details[name]}" if name in self.details else "")
            for name, passed in self.checks.items()
        )


def verify_result(s: Iterable[Point], m, c: Iterable[Point]) -> VerificationReport:
    """Check a normalisation result independently of how it was produced.

    ``m`` only needs integer attributes a, b, c, d, tx, ty, so deliberately
    broken maps can be checked too.
    """
    s, c = frozenset(s), frozenset(c)
    report = VerificationReport()
    det = m.a * m.d - m.b * m.c
    report.checks["determinant"] = det in (1, -1)
    report.details["determinant"] = str(det)

    image = frozenset((m.a * x + m.b * y + m.tx, m.c * x + m.d * y + m.ty) for x, y in s)
    report.checks["image"] = image == c
    if image != c:
        report.details["image"] = f"{len(image ^ c)} points differ"

    convex = bool(c) and is_digital_convex(c)
    report.checks["digital_convex"] = convex

    cls = classify(c) if c else None
    report.checks["connectivity"] = cls is not None and cls.almost4
    if cls is not None:
        report.details["connectivity"] = cls.tag.value

    if convex and s and is_digital_convex(s):
        k_s = lattice_diameter_fast(s)[0].k
        k_c = lattice_diameter_fast(c)[0].k
        report.checks["diameter"] = k_s == k_c
        report.details["diameter"] = f"{k_s} -> {k_c}"
    else:
        report.checks["diameter"] = False
    return report
