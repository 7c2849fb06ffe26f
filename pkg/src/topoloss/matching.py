"""Optimal correspondence between persistence diagrams and the loss value.

Per dimension, unmatched dots are sent to their orthogonal projection on
the diagonal {birth = death}; the assignment problem on the augmented
(n+m) x (n+m) cost matrix is solved exactly (Hungarian method via scipy).

The default objective is symmetric: unmatched dots on *both* sides pay
their diagonal cost, so a structure missing from the prediction still
costs something.  The asymmetric variant (only prediction dots pay) is
available behind a flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .persistence import PersistenceDiagram, PersistenceDot

__all__ = ["DIAGONAL", "MatchPair", "DiagramMatching", "match_diagrams",
           "topo_loss_value", "diagonal_cost", "pair_cost"]

DIAGONAL = "diag"


def pair_cost(p: PersistenceDot, q: PersistenceDot) -> float:
    """Squared Euclidean distance in the (death, birth) plane."""
    return (p.birth - q.birth) ** 2 + (p.death - q.death) ** 2


def diagonal_cost(p: PersistenceDot) -> float:
    """Squared distance to the orthogonal diagonal projection."""
    return (p.birth - p.death) ** 2 / 2.0


def _sorted_dots(dgm: PersistenceDiagram, dim: int) -> list[PersistenceDot]:
    # Canonical order makes the assignment deterministic across runs.
    return sorted(
        dgm.dots(dim),
        key=lambda d: (-d.birth, -d.death,
                       d.birth_pixel if d.birth_pixel is not None else (-1, -1)))


@dataclass(frozen=True)
class MatchPair:
    dim: int
    source: int | str  # index into dgm_f dots (canonical order) or DIAGONAL
    target: int | str  # index into dgm_g dots or DIAGONAL
    cost: float

    def to_json(self) -> dict:
        return {"dim": self.dim, "from": self.source, "to": self.target,
                "cost": self.cost}


@dataclass(frozen=True)
class DiagramMatching:
    dimension: int
    pairs: tuple[MatchPair, ...]
    cost: float
    dots_f: tuple[PersistenceDot, ...]
    dots_g: tuple[PersistenceDot, ...]

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.pairs]


def _match_dimension(dots_f, dots_g, dim: int, symmetric: bool) -> DiagramMatching:
    n, m = len(dots_f), len(dots_g)
    if n == 0 and m == 0:
        return DiagramMatching(dim, (), 0.0, (), ())
    size = n + m
    cost = np.zeros((size, size))
    for i, p in enumerate(dots_f):
        for j, q in enumerate(dots_g):
            cost[i, j] = pair_cost(p, q)
    cost[:n, m:] = np.inf
    for i, p in enumerate(dots_f):
        cost[i, m + i] = diagonal_cost(p)
    cost[n:, :m] = np.inf
    for j, q in enumerate(dots_g):
        cost[n + j, j] = diagonal_cost(q) if symmetric else 0.0
    rows, cols = linear_sum_assignment(cost)

    pairs = []
    total = 0.0
    for i, j in zip(rows.tolist(), cols.tolist()):
        if i < n and j < m:
            pairs.append(MatchPair(dim, i, j, cost[i, j]))
        elif i < n:
            pairs.append(MatchPair(dim, i, DIAGONAL, cost[i, j]))
        elif j < m:
            pairs.append(MatchPair(dim, DIAGONAL, j, cost[i, j]))
        else:
            continue  # diagonal-to-diagonal filler, never reported
        total += cost[i, j]
    return DiagramMatching(dim, tuple(pairs), float(total),
                           tuple(dots_f), tuple(dots_g))


def match_diagrams(dgm_f: PersistenceDiagram, dgm_g: PersistenceDiagram,
                   dims=(0, 1), symmetric: bool = True) -> list[DiagramMatching]:
    """Optimal per-dimension matching including diagonal projections."""
    return [
        _match_dimension(_sorted_dots(dgm_f, dim), _sorted_dots(dgm_g, dim),
                         dim, symmetric)
        for dim in sorted(dims)
    ]


def topo_loss_value(dgm_f: PersistenceDiagram, dgm_g: PersistenceDiagram,
                    dims=(0, 1), symmetric: bool = True) -> float:
    """Summed optimal matching cost over the requested dimensions.

    Zero exactly when the per-dimension dot multisets coincide.
    """
    return sum(m.cost for m in match_diagrams(dgm_f, dgm_g, dims, symmetric))
