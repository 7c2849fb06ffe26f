"""Brute-force threshold-sweep oracle for small diagrams.

Independent of the boundary-matrix path in `persistence`: dimension-0
births and merges are tracked by explicit component labeling while the
threshold sweeps the distinct pixel values in descending order; dimension-1
dots are recovered from the complement side (a loop of the superlevel set
encloses exactly one bounded region of absent cells, so loop births and
deaths are component merges and births of the complement, swept in the
opposite direction).

Only (birth, death) multisets are produced -- no critical pixels.  Grids
are capped at ~400 pixels; this is a test oracle, not a production path.
"""

from __future__ import annotations

import numpy as np

from .grid import LikelihoodMap, ValidationError
from .persistence import PersistenceDiagram, PersistenceDot

__all__ = ["oracle_diagram", "ORACLE_PIXEL_LIMIT"]

ORACLE_PIXEL_LIMIT = 400


class _Labels:
    def __init__(self):
        self.parent: dict = {}
        self.entry: dict = {}

    def add(self, x, entry_value):
        self.parent[x] = x
        self.entry[x] = entry_value

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root


def _dim0(values: np.ndarray) -> list[tuple[float, float]]:
    h, w = values.shape
    labels = _Labels()
    dots = []
    for alpha in sorted(np.unique(values))[::-1]:
        batch = [tuple(p) for p in np.argwhere(values == alpha)]
        for p in batch:
            labels.add(p, alpha)
        for r, c in batch:
            for q in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if q not in labels.parent:
                    continue
                a, b = labels.find((r, c)), labels.find(q)
                if a == b:
                    continue
                # The component with the lower birth threshold is younger.
                if labels.entry[a] > labels.entry[b]:
                    a, b = b, a
                if labels.entry[a] != alpha:
                    dots.append((labels.entry[a], alpha))
                labels.parent[a] = b
    return dots  # one essential component left implicit


def _dim1(values: np.ndarray) -> list[tuple[float, float]]:
    """Sweep ascending over the dual: nodes are unit squares plus an outer
    node; a square leaves the superlevel complex at its min pixel value, and
    two absent regions join when the separating edge or vertex leaves."""
    h, w = values.shape
    outer = "outer"
    labels = _Labels()
    labels.add(outer, -np.inf)
    dots = []

    # Events, processed in ascending value order.  Squares become nodes;
    # edges and vertices connect the regions on either side of them.
    events: list[tuple[float, int, tuple]] = []
    for r in range(h - 1):
        for c in range(w - 1):
            v = float(values[r:r + 2, c:c + 2].min())
            events.append((v, 0, ("square", (r, c))))
    for r in range(h):
        for c in range(w):
            if c + 1 < w:  # horizontal edge: squares above/below (or outer)
                v = float(min(values[r, c], values[r, c + 1]))
                up = (r - 1, c) if r > 0 else outer
                down = (r, c) if r < h - 1 else outer
                events.append((v, 1, ("join", up, down)))
            if r + 1 < h:  # vertical edge: squares left/right (or outer)
                v = float(min(values[r, c], values[r + 1, c]))
                left = (r, c - 1) if c > 0 else outer
                right = (r, c) if c < w - 1 else outer
                events.append((v, 1, ("join", left, right)))
            # vertex: connects all incident squares pairwise
            v = float(values[r, c])
            incident = [
                (rr, cc)
                for rr in (r - 1, r) for cc in (c - 1, c)
                if 0 <= rr < h - 1 and 0 <= cc < w - 1
            ]
            if len(incident) < 4:
                incident.append(outer)
            for i in range(len(incident)):
                for j in range(i + 1, len(incident)):
                    events.append((v, 1, ("join", incident[i], incident[j])))

    events.sort(key=lambda t: (t[0], t[1]))
    for value, _phase, ev in events:
        if ev[0] == "square":
            labels.add(ev[1], value)
        else:
            _, x, y = ev
            a, b = labels.find(x), labels.find(y)
            if a == b:
                continue
            if labels.entry[a] < labels.entry[b]:
                a, b = b, a
            # Region `a` appeared later in the ascending sweep: forward in
            # time its loop was born at `value` and died at its entry value.
            if labels.entry[a] != value:
                dots.append((value, labels.entry[a]))
            labels.parent[a] = b
    return dots


def oracle_diagram(m: LikelihoodMap) -> PersistenceDiagram:
    """Ground-truth (birth, death) multisets for grids of <= 400 pixels."""
    if m.height * m.width > ORACLE_PIXEL_LIMIT:
        raise ValidationError(
            f"oracle refuses grids over {ORACLE_PIXEL_LIMIT} pixels "
            f"({m.height}x{m.width} given)")
    values = np.asarray(m.values, dtype=np.float64)
    dots0 = [PersistenceDot(0, b, d, None, None) for b, d in _dim0(values)]
    dots1 = [PersistenceDot(1, b, d, None, None) for b, d in _dim1(values)]
    key = lambda dot: (-dot.birth, -dot.death)
    return PersistenceDiagram(tuple(sorted(dots0, key=key)),
                              tuple(sorted(dots1, key=key)))
