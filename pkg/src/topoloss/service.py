"""HTTP surface over the core: diagrams, losses, gradients, metrics.

Intended for long-running use, e.g. an external training loop requesting
per-patch losses and gradients.  All endpoints are pure request/response;
state never persists between calls.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .fixtures import FIXTURE_KINDS, make_fixture
from .grid import BinaryMask, LikelihoodMap, ValidationError
from .loss import total_loss
from .matching import match_diagrams
from .metrics import (adapted_rand, betti_error, label_regions, pixel_accuracy,
                      variation_of_information)
from .persistence import PersistenceDiagram, PersistenceDot, compute_diagram

app = FastAPI(title="topoloss", version=__version__)


class DotModel(BaseModel):
    dim: int
    birth: float
    death: float
    birth_pixel: list[int] | None = None
    death_pixel: list[int] | None = None


class DiagramRequest(BaseModel):
    values: list[list[float]]
    relative: bool = False


class DiagramResponse(BaseModel):
    dots: list[DotModel]


class LossRequest(BaseModel):
    f: list[list[float]]
    g: list[list[int]]
    lam: float = Field(default=1.0, alias="lambda")
    dims: list[int] = [0, 1]
    relative: bool = False
    include_gradient: bool = True

    model_config = {"populate_by_name": True}


class MatchRequest(BaseModel):
    dgm_f: list[DotModel]
    dgm_g: list[DotModel]
    dims: list[int] = [0, 1]
    symmetric: bool = True


class MetricsRequest(BaseModel):
    pred: list[list[int]]
    gt: list[list[int]]
    patches: int = 100
    size: int = 65
    seed: int = 0


class FixtureRequest(BaseModel):
    kind: str
    size: int = 65


def _wrap(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _diagram_from_models(dots: list[DotModel]) -> PersistenceDiagram:
    by_dim = {0: [], 1: []}
    for d in dots:
        if d.dim not in by_dim:
            raise HTTPException(status_code=422, detail=f"bad dimension {d.dim}")
        by_dim[d.dim].append(PersistenceDot(
            d.dim, d.birth, d.death,
            tuple(d.birth_pixel) if d.birth_pixel else None,
            tuple(d.death_pixel) if d.death_pixel else None))
    return PersistenceDiagram(tuple(by_dim[0]), tuple(by_dim[1]))


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/diagram", response_model=DiagramResponse)
def diagram(req: DiagramRequest):
    m = _wrap(LikelihoodMap, np.array(req.values))
    dgm = compute_diagram(m, relative=req.relative)
    return DiagramResponse(dots=[DotModel(**d) for d in dgm.to_json()])


@app.post("/loss")
def loss(req: LossRequest):
    f = _wrap(LikelihoodMap, np.array(req.f))
    g = _wrap(BinaryMask, np.array(req.g))
    report = _wrap(total_loss, f, g, lam=req.lam, dims=tuple(req.dims),
                   relative=req.relative)
    return report.to_json(include_gradient=req.include_gradient)


@app.post("/match")
def match(req: MatchRequest):
    matchings = match_diagrams(_diagram_from_models(req.dgm_f),
                               _diagram_from_models(req.dgm_g),
                               dims=tuple(req.dims), symmetric=req.symmetric)
    return {"cost": sum(m.cost for m in matchings),
            "pairs": [p for m in matchings for p in m.to_json()]}


@app.post("/metrics")
def metrics(req: MetricsRequest):
    pred = _wrap(BinaryMask, np.array(req.pred))
    gt = _wrap(BinaryMask, np.array(req.gt))
    pred_regions = label_regions(pred)
    gt_regions = label_regions(gt)
    return {
        "accuracy": pixel_accuracy(pred, gt),
        "ari": _wrap(adapted_rand, pred_regions, gt_regions),
        "voi": _wrap(variation_of_information, pred_regions, gt_regions),
        "betti_error": _wrap(betti_error, pred, gt, patches=req.patches,
                             size=req.size, seed=req.seed),
        "config": {"patches": req.patches, "size": req.size, "seed": req.seed},
    }


@app.post("/fixture")
def fixture(req: FixtureRequest):
    if req.kind not in FIXTURE_KINDS:
        raise HTTPException(status_code=422,
                            detail=f"unknown kind; choose from {FIXTURE_KINDS}")
    m = _wrap(make_fixture, req.kind, size=req.size)
    return {"kind": req.kind, "values": np.asarray(m.values, dtype=float).tolist()}
