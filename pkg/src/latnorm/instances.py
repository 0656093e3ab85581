"""Seeded digital convex test families and the text/JSON file formats.

Randomness comes from SplitMix64 so fixtures are reproducible in any
language:

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    output z ^ (z >> 31)

The generator is seeded with the 64-bit seed as its initial state.  An
integer in [lo, hi] is drawn by rejection: with span = hi - lo + 1, outputs
>= span * floor(2**64 / span) are discarded and lo + (z mod span) returned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterable

from .connectivity import classify
from .errors import BadParams, ParseError
from .lattice import INPUT_BOUND, AffineMap, Point, convex_hull, lattice_points_in_polygon

MASK64 = (1 << 64) - 1
RANDOM_HULL_CLAMP = 10**6


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = ((1 << 64) // span) * span
        while True:
            z = self.next()
            if z < limit:
                return lo + z % span


KINDS = ("disc", "random_hull", "thin_slab", "pompom", "rows")


@dataclass(frozen=True)
class GeneratorSpec:
    """``kind`` with its integer parameters.

    disc: radius.  random_hull: count, box.  thin_slab: length, width, slope.
    pompom: k.  rows: n.
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def _need(params, name, minimum):
    if name not in params:
        raise BadParams(f"missing parameter {name!r}")
    value = params[name]
    if not isinstance(value, int) or value < minimum:
        raise BadParams(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def disc(radius: int) -> frozenset:
    r2 = radius * radius
    pts = []
    for y in range(-radius, radius + 1):
        w = isqrt(r2 - y * y)
        pts.extend((x, y) for x in range(-w, w + 1))
    return frozenset(pts)


def rows(n: int) -> frozenset:
    return frozenset((x, 0) for x in range(n))


def pompom(k: int) -> frozenset:
    """Lattice points of the triangle (0,0), (k-1,0), (-1,k+1)."""
    return lattice_points_in_polygon(convex_hull([(0, 0), (k - 1, 0), (-1, k + 1)]))


def random_hull(count: int, box: int, rng: SplitMix64) -> frozenset:
    box = min(box, RANDOM_HULL_CLAMP)
    pts = [(rng.randint(-box, box), rng.randint(-box, box)) for _ in range(count)]
    return lattice_points_in_polygon(convex_hull(pts))


def _halfplane_points(constraints, ylo: int, yhi: int) -> frozenset:
    """Lattice points with a*x + b*y <= c for every (a, b, c), rows ylo..yhi."""
    pts = []
    for y in range(ylo, yhi + 1):
        lo, hi = None, None
        feasible = True
        for a, b, c in constraints:
            rhs = c - b * y
            if a > 0:
                v = rhs // a
                hi = v if hi is None else min(hi, v)
            elif a < 0:
                v = -(rhs // -a)
                lo = v if lo is None else max(lo, v)
            elif rhs < 0:
                feasible = False
        if feasible and lo is not None and hi is not None and lo <= hi:
            pts.extend((x, y) for x in range(lo, hi + 1))
    return frozenset(pts)


def thin_slab(length: int, width: int, slope: int, rng: SplitMix64) -> frozenset:
    """Lattice points of a long thin strip along a random primitive direction.

    With direction (p, q), n = p*p + q*q, t = p*x + q*y and u = p*y - q*x,
    the strip is -length*n <= t <= length*n and
    0 <= length*n*u <= width*length*n + e*t, so the upper side tilts by a
    random e in [0, width].  Each of the width+1 lattice lines u = const
    carries about 2*length+1 points.  Always contains the origin.
    """
    while True:
        p, q = rng.randint(-slope, slope), rng.randint(-slope, slope)
        if (p, q) != (0, 0) and gcd(p, q) == 1:
            break
    e = rng.randint(0, width)
    span = length * (p * p + q * q)
    constraints = [
        (p, q, span),                                  # t <= span
        (-p, -q, span),                                # -t <= span
        (q, -p, 0),                                    # -u <= 0
        (-q * span - e * p, p * span - e * q, width * span),  # span*u - e*t <= width*span
    ]
    ybound = length * max(abs(p), abs(q)) + width + e + 1
    return _halfplane_points(constraints, -ybound, ybound)


def generate(spec: GeneratorSpec) -> frozenset:
    kind, params = spec.kind, spec.params
    rng = SplitMix64(spec.seed)
    if kind == "disc":
        return disc(_need(params, "radius", 0))
    if kind == "random_hull":
        return random_hull(_need(params, "count", 1), _need(params, "box", 0), rng)
    if kind == "thin_slab":
        return thin_slab(
            _need(params, "length", 0), _need(params, "width", 0), _need(params, "slope", 1), rng
        )
    if kind == "pompom":
        return pompom(_need(params, "k", 2))
    if kind == "rows":
        return rows(_need(params, "n", 1))
    raise BadParams(f"unknown generator kind {kind!r}")


def random_unimodular(rng: SplitMix64, bound: int, shift: int = 0) -> AffineMap:
    """Uniform among matrices with entries in [-bound, bound] and det +-1."""
    while True:
        a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
        if a * d - b * c in (1, -1):
            return AffineMap(a, b, c, d, rng.randint(-shift, shift), rng.randint(-shift, shift))


# ---------------------------------------------------------------------------
# Formats


def parse_points(text: str) -> frozenset:
    """One ``x y`` pair per line; blank lines and ``#`` comments are skipped."""
    pts = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(lineno, f"expected two integers, got {len(fields)} fields")
        try:
            x, y = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(lineno, f"not an integer pair: {line!r}") from None
        if abs(x) > INPUT_BOUND or abs(y) > INPUT_BOUND:
            raise ParseError(lineno, "coordinate exceeds 2**31")
        pts.add((x, y))
    return frozenset(pts)


def format_points(s: Iterable[Point]) -> str:
    return "".join(f"{x} {y}\n" for x, y in sorted(s))


def _compact(value) -> str:
    return json.dumps(value, separators=(",", ":"))


def serialize_result(m: AffineMap, c: Iterable[Point], trace) -> str:
    """Result document with a fixed key order, one key per line."""
    c = sorted(c)
    cls = classify(c)
    doc = {
        "matrix": [[m.a, m.b], [m.c, m.d]],
        "translation": [m.tx, m.ty],
        "determinant": m.det,
        "points": [list(p) for p in c],
        "classification": cls.tag.value,
        "witness": list(cls.witness) if cls.witness is not None else None,
        "case": trace.case_label,
        "trace": [
            {
                "step": step.name,
                "matrix": [[step.map.a, step.map.b], [step.map.c, step.map.d]],
                "translation": [step.map.tx, step.map.ty],
                "outcome": step.outcome,
            }
            for step in trace.steps
        ],
        "fallback_used": trace.fallback_used,
    }
    body = ",\n".join(f"  {json.dumps(key)}: {_compact(value)}" for key, value in doc.items())
    return "{\n" + body + "\n}\n"


def parse_result(text: str) -> dict:
    doc = json.loads(text)
    doc["points"] = frozenset(tuple(p) for p in doc["points"])
    return doc
