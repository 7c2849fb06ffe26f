"""One-call binding: total loss and dense per-pixel gradient.

Intended as the backward pass of a custom loss inside an external autodiff
training loop: the caller multiplies the returned gradient by its own
d(pixel)/d(parameter) factors.  The binding is stateless and the core is
pure, so concurrent calls are safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topoloss import BinaryMask, LikelihoodMap, total_loss

__all__ = ["BoundLossResult", "loss_and_grad", "__version__"]

__version__ = "0.1.0"


@dataclass(frozen=True)
class BoundLossResult:
    """Scalar losses plus the dense gradient of l_total w.r.t. each pixel."""

    l_total: float
    l_bce: float
    l_topo: float
    gradient: np.ndarray

    def __post_init__(self):
        self.gradient.setflags(write=False)


def loss_and_grad(f, g, lam: float = 1.0, dims=(0, 1),
                  relative: bool = False) -> BoundLossResult:
    """Evaluate bce + lam * topological loss and its dense gradient.

    f is a 2D array of likelihoods in [0, 1]; g is a 2D binary array of the
    same shape.  Marshaling is a single copy into the core's immutable grid
    types; validation failures raise the core's exceptions unchanged.
    """
    fmap = LikelihoodMap(np.asarray(f, dtype=np.float64))
    gmask = BinaryMask(np.asarray(g))
    report = total_loss(fmap, gmask, lam=lam, dims=dims, relative=relative)
    return BoundLossResult(
        l_total=report.l_total,
        l_bce=report.l_bce,
        l_topo=report.l_topo,
        gradient=report.total_gradient(),
    )
