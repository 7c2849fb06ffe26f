"""Superlevel-set persistence of 2D likelihood maps on the pixel grid.

The complex is the V-construction: pixels are vertices, 4-neighbor pairs
are edges, and 2x2 pixel blocks are squares.  A cell enters the filtration
at the minimum of its vertex values, which is the upper-star filtration of
the piecewise-linear interpolation of the map; consequently every birth or
death is attributable to a single pixel (the cell's entry pixel).

Dimension-0 pairs come from a union-find sweep over the sorted cells;
dimension-1 pairs from column reduction of the square/edge boundary matrix
over Z/2 (edge columns are never reduced -- they are cleared by the
union-find pass, which already decides which edges merge components).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import LikelihoodMap, pad_frame

__all__ = [
    "FiltrationCell",
    "PersistenceDot",
    "PersistenceDiagram",
    "build_filtration",
    "compute_diagram",
    "betti_at_threshold",
]

#: 4-connectivity structuring element for component labeling.
FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class FiltrationCell:
    dimension: int
    vertex_pixels: tuple[tuple[int, int], ...]
    value: float
    entry_pixel: tuple[int, int]


@dataclass(frozen=True, order=True)
class PersistenceDot:
    """One topological structure: born at threshold `birth`, killed at the
    lower threshold `death` as the superlevel set grows.

    Critical pixels may be None when the structure is attributed to the
    synthetic boundary frame in relative mode (the frame is constant, so no
    gradient flows there).
    """

    dimension: int
    birth: float
    death: float
    birth_pixel: tuple[int, int] | None
    death_pixel: tuple[int, int] | None

    @property
    def persistence(self) -> float:
        return self.birth - self.death

    def to_json(self) -> dict:
        return {
            "dim": self.dimension,
            "birth": self.birth,
            "death": self.death,
            "birth_pixel": list(self.birth_pixel) if self.birth_pixel else None,
            "death_pixel": list(self.death_pixel) if self.death_pixel else None,
        }


@dataclass(frozen=True)
class PersistenceDiagram:
    """Per-dimension multisets of finite-persistence dots.

    Zero-persistence pairs are dropped and the single essential component
    (the one that never dies) is excluded.
    """

    dots_dim0: tuple[PersistenceDot, ...]
    dots_dim1: tuple[PersistenceDot, ...]

    def dots(self, dim: int) -> tuple[PersistenceDot, ...]:
        if dim == 0:
            return self.dots_dim0
        if dim == 1:
            return self.dots_dim1
        raise ValueError(f"dimension must be 0 or 1, got {dim}")

    def multiset(self, dim: int) -> list[tuple[float, float]]:
        return sorted((d.birth, d.death) for d in self.dots(dim))

    def to_json(self) -> list[dict]:
        return [d.to_json() for d in self.dots_dim0 + self.dots_dim1]


def _canonical(dots) -> tuple[PersistenceDot, ...]:
    # Deterministic order: most persistent structures first.
    return tuple(sorted(
        dots,
        key=lambda d: (-d.birth, -d.death,
                       d.birth_pixel if d.birth_pixel is not None else (-1, -1)),
    ))


class _Complex:
    """Flat-array view of the grid complex, sorted by
    (value desc, dim asc, entry pixel row-major asc, vertex tuple asc)."""

    def __init__(self, values: np.ndarray):
        h, w = values.shape
        self.h, self.w = h, w
        flat = values.ravel()
        n = h * w

        # Edges, identified by a stable id: horizontal ones first.
        ha = (np.arange(n).reshape(h, w)[:, :-1]).ravel()
        hb = ha + 1
        va = np.arange(n - w)
        vb = va + w
        ea = np.concatenate([ha, va])
        eb = np.concatenate([hb, vb])
        e_lo = np.minimum(flat[ea], flat[eb])
        e_entry = np.where(flat[ea] <= flat[eb], ea, eb)
        self.edge_a, self.edge_b = ea, eb
        self.edge_value, self.edge_entry = e_lo, e_entry
        num_h = ha.size

        # Squares keyed by top-left pixel; boundary edge ids precomputed.
        if h > 1 and w > 1:
            rr, cc = np.meshgrid(np.arange(h - 1), np.arange(w - 1), indexing="ij")
            rr, cc = rr.ravel(), cc.ravel()
            sa = rr * w + cc
            quad = np.stack([flat[sa], flat[sa + 1], flat[sa + w], flat[sa + w + 1]])
            self.square_value = quad.min(axis=0)
            self.square_entry = np.choose(
                quad.argmin(axis=0),
                [sa, sa + 1, sa + w, sa + w + 1])
            h_id = rr * (w - 1) + cc
            self.square_edges = np.stack([
                h_id,                      # top
                h_id + (w - 1),            # bottom
                num_h + rr * w + cc,       # left
                num_h + rr * w + cc + 1,   # right
            ], axis=1)
            self.square_a = sa
        else:
            self.square_value = np.empty(0)
            self.square_entry = np.empty(0, dtype=np.int64)
            self.square_edges = np.empty((0, 4), dtype=np.int64)
            self.square_a = np.empty(0, dtype=np.int64)

        cell_value = np.concatenate([flat, e_lo, self.square_value])
        cell_dim = np.concatenate([
            np.zeros(n, dtype=np.int8),
            np.ones(ea.size, dtype=np.int8),
            np.full(self.square_value.size, 2, dtype=np.int8)])
        cell_entry = np.concatenate([np.arange(n), e_entry, self.square_entry])
        # Tie key orders cells with equal (value, dim, entry) by their
        # ascending vertex tuple; the smallest vertex id determines it.
        cell_tie = np.concatenate([np.arange(n), ea * n + eb, self.square_a])
        cell_ref = np.concatenate([
            np.arange(n), np.arange(ea.size), np.arange(self.square_value.size)])
        order = np.lexsort((cell_tie, cell_entry, cell_dim, -cell_value))

        self.order = order.tolist()
        self.cell_dim = cell_dim.tolist()
        self.cell_ref = cell_ref.tolist()
        self.flat = flat.tolist()


def build_filtration(m: LikelihoodMap) -> list[FiltrationCell]:
    """The full sorted filtration; the prefix of cells with value >= alpha
    triangulates the superlevel set at alpha."""
    cx = _Complex(m.values)
    w = m.width
    pix = lambda vid: divmod(int(vid), w)
    out = []
    for idx in cx.order:
        dim, ref = cx.cell_dim[idx], cx.cell_ref[idx]
        if dim == 0:
            out.append(FiltrationCell(0, (pix(ref),), cx.flat[ref], pix(ref)))
        elif dim == 1:
            a, b = int(cx.edge_a[ref]), int(cx.edge_b[ref])
            out.append(FiltrationCell(
                1, (pix(a), pix(b)), float(cx.edge_value[ref]),
                pix(int(cx.edge_entry[ref]))))
        else:
            a = int(cx.square_a[ref])
            out.append(FiltrationCell(
                2, (pix(a), pix(a + 1), pix(a + w), pix(a + w + 1)),
                float(cx.square_value[ref]), pix(int(cx.square_entry[ref]))))
    return out


def compute_diagram(m: LikelihoodMap, relative: bool = False) -> PersistenceDiagram:
    """Persistence diagram of the superlevel filtration with critical-pixel
    attribution.

    With relative=True the map is padded with a value-1.0 frame first and
    all reported pixels are translated back to original coordinates; a
    critical pixel falling on the frame is reported as None.
    """
    values = pad_frame(m, 1.0).values if relative else m.values
    h, w = values.shape
    cx = _Complex(values)

    def coord(vid: int):
        r, c = divmod(vid, w)
        if relative:
            r, c = r - 1, c - 1
            if not (0 <= r < h - 2 and 0 <= c < w - 2):
                return None
        return (r, c)

    # Union-find state for dimension 0.
    parent = list(range(h * w))
    birth_value = [0.0] * (h * w)
    birth_vertex = [0] * (h * w)
    created = [0] * (h * w)  # filtration position of the creating vertex

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    edge_a = cx.edge_a.tolist()
    edge_b = cx.edge_b.tolist()
    edge_value = cx.edge_value.tolist()
    edge_entry = cx.edge_entry.tolist()
    square_value = cx.square_value.tolist()
    square_entry = cx.square_entry.tolist()
    square_edges = cx.square_edges.tolist()
    flat = cx.flat

    # Edge ranks follow the global filtration order so that the reduction
    # pivot (largest rank) is the latest-entering boundary edge.
    edge_rank = [0] * len(edge_a)
    rank_info: list[int] = []  # rank -> edge ref
    dots0: list[PersistenceDot] = []
    pairs1: list[tuple[int, float, float, int]] = []
    pivot: dict[int, int] = {}  # pivot rank -> reduced column bitset
    next_rank = 0

    for pos, idx in enumerate(cx.order):
        dim = cx.cell_dim[idx]
        ref = cx.cell_ref[idx]
        if dim == 0:
            birth_value[ref] = flat[ref]
            birth_vertex[ref] = ref
            created[ref] = pos
        elif dim == 1:
            edge_rank[ref] = next_rank
            rank_info.append(ref)
            next_rank += 1
            ra, rb = find(edge_a[ref]), find(edge_b[ref])
            if ra == rb:
                continue  # cycle-creating edge; paired later by reduction
            # Elder rule: the component created later in the filtration dies.
            if created[ra] > created[rb]:
                ra, rb = rb, ra
            value = edge_value[ref]
            if birth_value[rb] != value:
                dots0.append(PersistenceDot(
                    0, birth_value[rb], value,
                    coord(birth_vertex[rb]), coord(edge_entry[ref])))
            parent[rb] = ra
        else:
            col = 0
            for e in square_edges[ref]:
                col |= 1 << edge_rank[e]
            while col:
                p = col.bit_length() - 1
                other = pivot.get(p)
                if other is None:
                    pivot[p] = col
                    be = rank_info[p]
                    if edge_value[be] != square_value[ref]:
                        pairs1.append((edge_entry[be], edge_value[be],
                                       square_value[ref], square_entry[ref]))
                    break
                col ^= other

    dots1 = [
        PersistenceDot(1, bv, dv, coord(be), coord(de))
        for be, bv, dv, de in pairs1
    ]
    return PersistenceDiagram(_canonical(dots0), _canonical(dots1))


def betti_at_threshold(m: LikelihoodMap, alpha: float) -> tuple[int, int]:
    """Betti numbers (components, loops) of the superlevel set at alpha.

    beta1 is computed as beta0 - Euler characteristic of the cubical
    subcomplex induced by the pixels with value >= alpha.
    """
    mask = m.values >= alpha
    if not mask.any():
        return (0, 0)
    _, beta0 = ndimage.label(mask, structure=FOUR_CONNECTED)
    v = int(mask.sum())
    e = int((mask[:, :-1] & mask[:, 1:]).sum() + (mask[:-1, :] & mask[1:, :]).sum())
    f = int((mask[:-1, :-1] & mask[:-1, 1:] & mask[1:, :-1] & mask[1:, 1:]).sum())
    chi = v - e + f
    return (int(beta0), int(beta0 - chi))
