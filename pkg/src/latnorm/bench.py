"""Timing ladder on disc instances."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from math import isqrt, pi, sqrt

from .diameter import lattice_diameter_fast
from .instances import disc
from .lattice import convex_hull
from .normalize import to_almost_4_connected

CSV_HEADER = "n,h,k,diameter_ms,normalize_ms,rows_scanned"


@dataclass(frozen=True)
class BenchRow:
    n: int
    h: int
    k: int
    diameter_ms: float
    normalize_ms: float
    rows_scanned: int

    def csv(self) -> str:
        return f"{self.n},{self.h},{self.k},{self.diameter_ms:.3f},{self.normalize_ms:.3f},{self.rows_scanned}"


def disc_radius_for(n: int) -> int:
    """Radius whose disc holds roughly n lattice points."""
    return max(1, round(sqrt(n / pi)))


def _median_ms(fn, warmups: int, repeats: int) -> float:
    for _ in range(warmups):
        fn()
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(samples)


def bench_one(n_target: int, warmups: int = 3, repeats: int = 5) -> BenchRow:
    s = disc(disc_radius_for(n_target))
    hull = convex_hull(s)
    result, stats = lattice_diameter_fast(s, hull)
    diameter_ms = _median_ms(lambda: lattice_diameter_fast(s, hull), warmups, repeats)
    normalize_ms = _median_ms(lambda: to_almost_4_connected(s, check=False), warmups, repeats)
    return BenchRow(len(s), len(hull), result.k, diameter_ms, normalize_ms, stats.rows_scanned)


def run_bench(sizes, warmups: int = 3, repeats: int = 5) -> list[BenchRow]:
    return [bench_one(n, warmups, repeats) for n in sizes]


def parse_sizes(text: str) -> list[int]:
    """'1e3,1e4' -> [1000, 10000].  Accepts plain integers and NeM forms."""
    sizes = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            raise ValueError("empty size")
        if "e" in item:
            mant, _, exp = item.partition("e")
            value = int(mant) * 10 ** int(exp)
        else:
            value = int(item)
        if value < 1:
            raise ValueError(f"size must be positive: {item}")
        sizes.append(value)
    return sizes


def row_bound(n: int, h: int) -> int:
    """16 * sqrt(n) * h, rounded up."""
    return 16 * h * (isqrt(n - 1) + 1)
