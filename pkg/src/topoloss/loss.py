"""Total loss = cross-entropy + lambda * topological loss, with gradients.

The topological gradient lives only at critical pixels: for each dot p of
the prediction's diagram, 2*(f(c_b) - birth(match)) is accumulated at the
birth pixel and 2*(f(c_d) - death(match)) at the death pixel.  Ground
truth dots matched to the diagonal contribute nothing (they have no
critical pixel in f).  The chain-rule factor into network parameters is
deliberately *not* applied here; in direct descent the parameters are the
pixel values themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import BinaryMask, LikelihoodMap, ValidationError
from .matching import DIAGONAL, DiagramMatching, match_diagrams
from .persistence import compute_diagram

__all__ = ["BCE_CLAMP_EPS", "GradientMap", "LossReport", "bce_loss",
           "topo_grad", "total_loss"]

#: Likelihoods are clamped to [eps, 1-eps] before logs.
BCE_CLAMP_EPS = 1e-7


@dataclass
class GradientMap:
    """Sparse pixel -> d(L_topo)/d(f(pixel)) map."""

    height: int
    width: int
    entries: dict[tuple[int, int], float] = field(default_factory=dict)

    def add(self, pixel: tuple[int, int] | None, value: float) -> None:
        if pixel is None or value == 0.0:
            return  # frame-attributed or zero contribution: nothing to record
        self.entries[pixel] = self.entries.get(pixel, 0.0) + value

    def dense(self) -> np.ndarray:
        out = np.zeros((self.height, self.width))
        for (r, c), v in self.entries.items():
            out[r, c] = v
        return out

    def to_json(self) -> list[list]:
        return [[r, c, v] for (r, c), v in sorted(self.entries.items())]


@dataclass
class LossReport:
    l_bce: float
    l_topo: float
    l_topo_by_dim: dict[int, float]
    lam: float
    matchings: list[DiagramMatching]
    topo_gradient: GradientMap
    bce_gradient: np.ndarray | None = None

    @property
    def l_total(self) -> float:
        return self.l_bce + self.lam * self.l_topo

    def total_gradient(self) -> np.ndarray:
        grad = self.lam * self.topo_gradient.dense()
        if self.bce_gradient is not None:
            grad = grad + self.bce_gradient
        return grad

    def to_json(self, include_gradient: bool = True) -> dict:
        out = {
            "l_bce": self.l_bce,
            "l_topo": self.l_topo,
            "l_topo_by_dim": {str(k): v for k, v in self.l_topo_by_dim.items()},
            "lambda": self.lam,
            "l_total": self.l_total,
            "matching": [p for m in self.matchings for p in m.to_json()],
        }
        if include_gradient:
            out["gradient"] = self.topo_gradient.to_json()
        return out


def _check_shapes(f: LikelihoodMap, g: BinaryMask) -> None:
    if f.shape != g.shape:
        raise ValidationError(
            f"shape mismatch: likelihood {f.shape} vs ground truth {g.shape}")


def bce_loss(f: LikelihoodMap, g: BinaryMask) -> tuple[float, np.ndarray]:
    """Mean binary cross-entropy and its per-pixel gradient.

    The mean (rather than sum) keeps lambda's scale independent of patch
    size.
    """
    _check_shapes(f, g)
    p = np.clip(f.values, BCE_CLAMP_EPS, 1.0 - BCE_CLAMP_EPS)
    y = g.values.astype(np.float64)
    n = p.size
    value = float(-np.sum(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)) / n)
    inside = (f.values > BCE_CLAMP_EPS) & (f.values < 1.0 - BCE_CLAMP_EPS)
    grad = np.where(inside, (-y / p + (1.0 - y) / (1.0 - p)) / n, 0.0)
    return value, grad


def topo_grad(f: LikelihoodMap, g: BinaryMask, dims=(0, 1),
              relative: bool = False, symmetric: bool = True) -> LossReport:
    """Topological loss with its sparse per-pixel gradient.

    Multiple dots sharing a critical pixel accumulate additively.
    """
    _check_shapes(f, g)
    dgm_f = compute_diagram(f, relative=relative)
    dgm_g = compute_diagram(g.to_likelihood(), relative=relative)
    matchings = match_diagrams(dgm_f, dgm_g, dims=dims, symmetric=symmetric)

    grad = GradientMap(f.height, f.width)
    by_dim: dict[int, float] = {}
    for m in matchings:
        by_dim[m.dimension] = m.cost
        for pair in m.pairs:
            if pair.source == DIAGONAL:
                continue  # unmatched ground-truth dot: no critical pixel in f
            dot = m.dots_f[pair.source]
            if pair.target == DIAGONAL:
                mid = (dot.birth + dot.death) / 2.0
                target_birth = target_death = mid
            else:
                target = m.dots_g[pair.target]
                target_birth, target_death = target.birth, target.death
            grad.add(dot.birth_pixel, 2.0 * (dot.birth - target_birth))
            grad.add(dot.death_pixel, 2.0 * (dot.death - target_death))

    return LossReport(
        l_bce=0.0,
        l_topo=float(sum(by_dim.values())),
        l_topo_by_dim=by_dim,
        lam=1.0,
        matchings=matchings,
        topo_gradient=grad,
    )


def total_loss(f: LikelihoodMap, g: BinaryMask, lam: float = 1.0,
               dims=(0, 1), relative: bool = False,
               symmetric: bool = True) -> LossReport:
    """Combined report: BCE + lambda * topological loss and both gradients."""
    if lam < 0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    report = topo_grad(f, g, dims=dims, relative=relative, symmetric=symmetric)
    value, grad = bce_loss(f, g)
    report.l_bce = value
    report.bce_gradient = grad
    report.lam = lam
    return report
