"""Wall-time benchmark of diagram computation over patch sizes."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .grid import LikelihoodMap, ValidationError
from .persistence import compute_diagram

__all__ = ["BenchRow", "run_bench"]


@dataclass(frozen=True)
class BenchRow:
    size: int
    kind: str  # "random" or "rings"
    mean_seconds: float
    dots: int


def _random_map(size: int, rng) -> LikelihoodMap:
    return LikelihoodMap(rng.random((size, size)))


def _ring_grid(size: int) -> LikelihoodMap:
    # Tiled concentric structure: many handles, stresses the reduction.
    r = np.arange(size)
    dist = np.minimum(r[:, None] % 8, 7 - r[:, None] % 8) + \
        np.minimum(r[None, :] % 8, 7 - r[None, :] % 8)
    return LikelihoodMap(((dist % 4) / 3.0))


def run_bench(sizes, repeats: int = 3, seed: int = 0) -> list[BenchRow]:
    """Time compute_diagram on random and structured maps per size.

    Dot counts are deterministic given the seed; wall times are not.
    """
    if any(s < 3 for s in sizes):
        raise ValidationError("bench sizes must be >= 3")
    rng = np.random.default_rng(seed)
    rows = []
    for size in sizes:
        for kind in ("random", "rings"):
            total = 0.0
            dots = 0
            for _ in range(repeats):
                m = _random_map(size, rng) if kind == "random" else _ring_grid(size)
                start = time.perf_counter()
                dgm = compute_diagram(m, relative=True)
                total += time.perf_counter() - start
                dots = len(dgm.dots_dim0) + len(dgm.dots_dim1)
            rows.append(BenchRow(size, kind, total / repeats, dots))
    return rows


def bench_csv(rows) -> str:
    lines = ["size,kind,mean_seconds,dots"]
    for r in rows:
        lines.append(f"{r.size},{r.kind},{r.mean_seconds:.6f},{r.dots}")
    return "\n".join(lines) + "\n"
