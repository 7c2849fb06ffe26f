"""Command-line surface: diagrams, losses, gradients, descent, metrics,
benchmark, fixture generation, and the HTTP service."""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import __version__
from .bench import bench_csv, run_bench
from .descent import DescentConfig, run_descent
from .fixtures import FIXTURE_KINDS, make_fixture
from .grid import BinaryMask, LikelihoodMap, ValidationError
from .grid_io import ParseError, load_map, save_map
from .loss import total_loss
from .metrics import (adapted_rand, betti_error, label_regions, pixel_accuracy,
                      variation_of_information)
from .persistence import compute_diagram


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(sorted({int(t) for t in text.split(",") if t.strip()}))
    except ValueError:
        raise ValidationError(f"bad dims {text!r}; expected e.g. '0,1'") from None
    if not dims or any(d not in (0, 1) for d in dims):
        raise ValidationError(f"dims must be a subset of {{0,1}}, got {text!r}")
    return dims


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


@click.group()
@click.version_option(__version__)
def cli():
    """Persistence diagrams, topology-preserving losses, and repair demos
    for 2D likelihood maps."""


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(["likelihood", "mask"]), default="likelihood")
@click.option("--relative/--no-relative", default=False)
@click.option("--out", type=click.Path(), default=None)
def diagram(input_path, kind, relative, out):
    """Persistence diagram of a map, as JSON."""
    m = load_map(input_path, kind)
    if isinstance(m, BinaryMask):
        m = m.to_likelihood()
    dgm = compute_diagram(m, relative=relative)
    _emit(json.dumps(dgm.to_json(), indent=2), out)


def _loss_report(pred, gt, lam, dims, relative):
    f = load_map(pred, "likelihood")
    g = load_map(gt, "mask")
    return total_loss(f, g, lam=lam, dims=_parse_dims(dims), relative=relative)


@cli.command()
@click.option("--pred", required=True, type=click.Path(exists=True))
@click.option("--gt", required=True, type=click.Path(exists=True))
@click.option("--lambda", "lam", type=float, default=1.0)
@click.option("--dims", default="0,1")
@click.option("--relative/--no-relative", default=False)
@click.option("--out", type=click.Path(), default=None)
def loss(pred, gt, lam, dims, relative, out):
    """Total loss (BCE + lambda * topological) with the matching."""
    report = _loss_report(pred, gt, lam, dims, relative)
    _emit(json.dumps(report.to_json(include_gradient=False), indent=2), out)


@cli.command()
@click.option("--pred", required=True, type=click.Path(exists=True))
@click.option("--gt", required=True, type=click.Path(exists=True))
@click.option("--lambda", "lam", type=float, default=1.0)
@click.option("--dims", default="0,1")
@click.option("--relative/--no-relative", default=False)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", type=click.Path(), default=None)
def grad(pred, gt, lam, dims, relative, fmt, out):
    """Per-pixel topological gradient: sparse JSON or dense CSV."""
    report = _loss_report(pred, gt, lam, dims, relative)
    if fmt == "json":
        _emit(json.dumps(report.to_json(include_gradient=True), indent=2), out)
    else:
        dense = report.topo_gradient.dense()
        _emit("\n".join(",".join(repr(v) for v in row) for row in dense.tolist()), out)


@cli.command()
@click.option("--pred", required=True, type=click.Path(exists=True),
              help="initial likelihood map")
@click.option("--gt", required=True, type=click.Path(exists=True))
@click.option("--step", type=float, default=0.05)
@click.option("--iters", type=int, default=300)
@click.option("--lambda", "lam", type=float, default=1.0)
@click.option("--dims", default="0,1")
@click.option("--relative/--no-relative", default=True)
@click.option("--snapshot-every", type=int, default=10)
@click.option("--clamp/--no-clamp", default=True)
@click.option("--seed", type=int, default=0)
@click.option("--out-dir", required=True, type=click.Path())
def descend(pred, gt, step, iters, lam, dims, relative, snapshot_every, clamp,
            seed, out_dir):
    """Topological repair: gradient descent directly on pixel values."""
    f0 = load_map(pred, "likelihood")
    g = load_map(gt, "mask")
    cfg = DescentConfig(step_size=step, iterations=iters, lam=lam,
                        dims=_parse_dims(dims), relative=relative,
                        snapshot_every=snapshot_every, seed=seed, clamp=clamp)
    final, trajectory = run_descent(f0, g, cfg, out_dir=out_dir)
    save_map(final, f"{out_dir}/final.pgm", fmt="pgm16")
    last = trajectory[-1]
    click.echo(f"iterations={len(trajectory)} l_total={last.l_total:.6g} "
               f"l_topo={last.l_topo:.6g} (outputs in {out_dir})")


@cli.command()
@click.option("--pred", required=True, type=click.Path(exists=True))
@click.option("--gt", required=True, type=click.Path(exists=True))
@click.option("--patches", type=int, default=100)
@click.option("--size", type=int, default=65)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def metrics(pred, gt, patches, size, seed, out):
    """Pixel accuracy, ARI, VOI, and Betti number error."""
    p = load_map(pred, "mask")
    g = load_map(gt, "mask")
    result = {
        "accuracy": pixel_accuracy(p, g),
        "ari": adapted_rand(label_regions(p), label_regions(g)),
        "voi": variation_of_information(label_regions(p), label_regions(g)),
        "betti_error": betti_error(p, g, patches=patches, size=size, seed=seed),
        "config": {"patches": patches, "size": size, "seed": seed,
                   "dim": 1, "relative": True},
    }
    _emit(json.dumps(result, indent=2), out)


@cli.command()
@click.option("--sizes", default="17,33,65,129")
@click.option("--repeats", type=int, default=3)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def bench(sizes, repeats, seed, out):
    """Diagram computation wall time per patch size, as CSV."""
    try:
        size_list = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise ValidationError(f"bad sizes {sizes!r}") from None
    rows = run_bench(size_list, repeats=repeats, seed=seed)
    _emit(bench_csv(rows), out)


@cli.command("gen-fixture")
@click.option("--kind", required=True, type=click.Choice(FIXTURE_KINDS))
@click.option("--size", type=int, default=65)
@click.option("--ring-value", type=float, default=0.9)
@click.option("--gap-value", type=float, default=0.3)
@click.option("--gap-width", type=int, default=3)
@click.option("--format", "fmt", type=click.Choice(["pgm16", "pgm8", "csv"]),
              default="pgm16")
@click.option("--out", required=True, type=click.Path())
def gen_fixture(kind, size, ring_value, gap_value, gap_width, fmt, out):
    """Emit a synthetic fixture (rings, branches, figure-eights)."""
    kwargs = {}
    if kind == "broken-ring":
        kwargs = {"ring_value": ring_value, "gap_value": gap_value,
                  "gap_width": gap_width}
    m = make_fixture(kind, size=size, **kwargs)
    save_map(m, out, fmt=fmt)
    click.echo(f"wrote {kind} fixture to {out}")


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("topoloss.service:app", host=host, port=port)


def main():
    try:
        cli(standalone_mode=False)
    except (ValidationError, ParseError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)


if __name__ == "__main__":
    main()
