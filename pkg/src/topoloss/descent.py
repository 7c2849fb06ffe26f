"""Topological repair by projected gradient descent on pixel values.

The network-free analogue of training: the parameters are the pixel
values themselves, so the chain rule terminates at the sparse critical-
pixel gradient.  Diagrams and the matching are recomputed every step; the
critical pixels move from iteration to iteration.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .grid import BinaryMask, LikelihoodMap, ValidationError
from .grid_io import save_map
from .loss import LossReport, total_loss

__all__ = ["DescentConfig", "DescentDiverged", "DescentRecord", "run_descent"]


class DescentDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class DescentConfig:
    step_size: float = 0.05
    iterations: int = 300
    lam: float = 1.0
    dims: tuple[int, ...] = (0, 1)
    relative: bool = True
    snapshot_every: int = 0  # 0 disables snapshots
    seed: int = 0
    clamp: bool = True

    def __post_init__(self):
        if not (self.step_size > 0 and np.isfinite(self.step_size)):
            raise ValidationError(f"step_size must be finite and > 0")
        if self.iterations < 1:
            raise ValidationError("iterations must be >= 1")
        if self.lam < 0:
            raise ValidationError("lambda must be >= 0")

    def to_json(self) -> dict:
        return {
            "step_size": self.step_size,
            "iterations": self.iterations,
            "lambda": self.lam,
            "dims": list(self.dims),
            "relative": self.relative,
            "snapshot_every": self.snapshot_every,
            "seed": self.seed,
            "clamp": self.clamp,
        }


@dataclass
class DescentRecord:
    iteration: int
    l_bce: float
    l_topo: float
    l_total: float
    snapshot: str | None = None

    def to_json(self) -> dict:
        return {"iteration": self.iteration, "l_bce": self.l_bce,
                "l_topo": self.l_topo, "l_total": self.l_total,
                "snapshot": self.snapshot}


def _snapshot(values: np.ndarray, out_dir: str, iteration: int) -> str:
    seg = BinaryMask((values >= 0.5).astype(np.uint8))
    path = os.path.join(out_dir, f"segmentation_{iteration:05d}.pgm")
    save_map(seg, path, fmt="pgm8")
    return path


def run_descent(f0: LikelihoodMap, g: BinaryMask, cfg: DescentConfig,
                out_dir: str | None = None
                ) -> tuple[LikelihoodMap, list[DescentRecord]]:
    """Iterate f <- clamp(f - step * (grad_bce + lambda * grad_topo)).

    Returns the final map and the per-iteration loss trajectory.  When
    out_dir is given, thresholded-segmentation snapshots and a loss-curve
    CSV are written there.
    """
    if f0.shape != g.shape:
        raise ValidationError(f"shape mismatch: {f0.shape} vs {g.shape}")
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)

    values = np.array(f0.values)
    trajectory: list[DescentRecord] = []
    for it in range(cfg.iterations):
        f = LikelihoodMap(values)
        report: LossReport = total_loss(
            f, g, lam=cfg.lam, dims=cfg.dims, relative=cfg.relative)
        if not np.isfinite(report.l_total):
            raise DescentDiverged(
                f"non-finite loss at iteration {it}: "
                f"bce={report.l_bce} topo={report.l_topo}")
        record = DescentRecord(it, report.l_bce, report.l_topo, report.l_total)
        if out_dir is not None and cfg.snapshot_every > 0 and it % cfg.snapshot_every == 0:
            record.snapshot = _snapshot(values, out_dir, it)
        trajectory.append(record)

        values = values - cfg.step_size * report.total_gradient()
        if cfg.clamp:
            np.clip(values, 0.0, 1.0, out=values)
        elif values.min() < 0.0 or values.max() > 1.0:
            raise DescentDiverged(
                f"iterate left [0, 1] at iteration {it}; enable clamping")

    final = LikelihoodMap(values)
    if out_dir is not None:
        if cfg.snapshot_every > 0:
            _snapshot(values, out_dir, cfg.iterations)
        with open(os.path.join(out_dir, "losses.csv"), "w") as fh:
            fh.write("iteration,l_bce,l_topo,l_total\n")
            for rec in trajectory:
                fh.write(f"{rec.iteration},{rec.l_bce!r},{rec.l_topo!r},{rec.l_total!r}\n")
        with open(os.path.join(out_dir, "trajectory.json"), "w") as fh:
            json.dump({"config": cfg.to_json(),
                       "trajectory": [r.to_json() for r in trajectory]}, fh, indent=2)
    return final, trajectory
