import numpy as np
import pytest

from topoloss import LikelihoodMap, PersistenceDiagram, PersistenceDot
from topoloss.matching import diagonal_cost, pair_cost


def random_grid_map(rng, max_side=12, levels=8) -> LikelihoodMap:
    """Random map with values on a 1/levels grid (plateaus and ties likely)."""
    h, w = rng.integers(2, max_side + 1, 2)
    return LikelihoodMap(rng.integers(0, levels + 1, (h, w)) / levels)


def distinct_value_map(rng, side=9) -> LikelihoodMap:
    """Pairwise-distinct values, well separated relative to FD steps."""
    n = side * side
    return LikelihoodMap((rng.permutation(n).reshape(side, side) + 0.5) / (n + 1))


def make_diagram(dots_by_dim) -> PersistenceDiagram:
    dims = {0: [], 1: []}
    for dim, pairs in dots_by_dim.items():
        for b, d in pairs:
            dims[dim].append(PersistenceDot(dim, b, d, None, None))
    return PersistenceDiagram(tuple(dims[0]), tuple(dims[1]))


def exhaustive_min_cost(dots_f, dots_g, symmetric=True) -> float:
    """Enumerate every partial injective matching; leftovers go diagonal."""
    best = [np.inf]

    def recurse(i, used, acc):
        if acc >= best[0]:
            return
        if i == len(dots_f):
            if symmetric:
                acc += sum(diagonal_cost(q) for j, q in enumerate(dots_g)
                           if j not in used)
            best[0] = min(best[0], acc)
            return
        p = dots_f[i]
        recurse(i + 1, used, acc + diagonal_cost(p))
        for j, q in enumerate(dots_g):
            if j not in used:
                recurse(i + 1, used | {j}, acc + pair_cost(p, q))

    recurse(0, frozenset(), 0.0)
    return float(best[0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
