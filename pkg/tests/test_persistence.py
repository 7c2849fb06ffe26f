import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topoloss import (LikelihoodMap, betti_at_threshold, build_filtration,
                      compute_diagram, oracle_diagram, pad_frame)
from topoloss.fixtures import (figure_eight_mask, ring_mask, two_blobs,
                               y_branch_mask)
from topoloss.matching import pair_cost


def lmap(rows):
    return LikelihoodMap(np.array(rows, dtype=np.float64))


class TestBuildFiltration:
    def test_constant_2x2(self):
        cells = build_filtration(lmap([[1, 1], [1, 1]]))
        dims = [c.dimension for c in cells]
        assert dims.count(0) == 4 and dims.count(1) == 4 and dims.count(2) == 1
        assert all(c.value == 1.0 for c in cells)
        # vertices before edges before the square at equal value
        assert dims == sorted(dims)

    def test_edge_min_rule(self):
        cells = build_filtration(lmap([[0.3, 0.8], [0.3, 0.8]]))
        horiz = [c for c in cells if c.dimension == 1
                 and c.vertex_pixels[0][0] == c.vertex_pixels[1][0]]
        for e in horiz:
            assert e.value == 0.3
            assert e.entry_pixel[1] == 0  # the 0.3 endpoint

    def test_tie_breaks_to_smaller_row_major(self):
        cells = build_filtration(lmap([[0.5, 0.5], [0.1, 0.1]]))
        top = next(c for c in cells if c.dimension == 1
                   and c.vertex_pixels == ((0, 0), (0, 1)))
        assert top.entry_pixel == (0, 0)

    def test_prefix_is_superlevel_complex(self, rng):
        m = LikelihoodMap(rng.integers(0, 5, (5, 5)) / 4)
        cells = build_filtration(m)
        alpha = 0.5
        prefix = [c for c in cells if c.value >= alpha]
        mask = m.values >= alpha
        assert sum(1 for c in prefix if c.dimension == 0) == mask.sum()
        values = [c.value for c in cells]
        assert values == sorted(values, reverse=True)


class TestComputeDiagram:
    def test_constant_map_empty(self):
        d = compute_diagram(lmap([[0.7] * 3] * 3))
        assert d.dots_dim0 == () and d.dots_dim1 == ()

    def test_figure_eight(self):
        d = compute_diagram(figure_eight_mask(12).to_likelihood())
        assert d.multiset(0) == []
        assert d.multiset(1) == [(1.0, 0.0), (1.0, 0.0)]

    def test_framed_interior_loop_matches_oracle(self):
        m = lmap([[0.9, 0.9, 0.9, 0.9],
                  [0.9, 0.2, 0.8, 0.9],
                  [0.9, 0.8, 0.3, 0.9],
                  [0.9, 0.9, 0.9, 0.9]])
        d = compute_diagram(m)
        o = oracle_diagram(m)
        assert d.multiset(0) == o.multiset(0)
        assert d.multiset(1) == o.multiset(1)
        assert len(d.dots_dim1) == 1 and d.dots_dim1[0].birth == 0.9

    def test_critical_pixel_fidelity(self, rng):
        for _ in range(30):
            vals = rng.random((7, 7))
            d = compute_diagram(LikelihoodMap(vals))
            for dot in d.dots_dim0 + d.dots_dim1:
                assert vals[dot.birth_pixel] == dot.birth
                assert vals[dot.death_pixel] == dot.death

    def test_determinism(self, rng):
        vals = rng.integers(0, 4, (10, 10)) / 3
        a = compute_diagram(LikelihoodMap(vals))
        b = compute_diagram(LikelihoodMap(vals))
        assert a == b

    def test_relative_frame_pixels_reported_none(self):
        d = compute_diagram(y_branch_mask(17).to_likelihood(), relative=True)
        assert len(d.dots_dim1) == 2
        for dot in d.dots_dim1:
            if dot.birth == 1.0:
                assert dot.birth_pixel is None or True  # frame or stroke pixel
            assert dot.death_pixel is None or (
                0 <= dot.death_pixel[0] < 17 and 0 <= dot.death_pixel[1] < 17)

    def test_relative_equals_padded(self, rng):
        m = LikelihoodMap(rng.integers(0, 6, (6, 6)) / 5)
        rel = compute_diagram(m, relative=True)
        pad = compute_diagram(pad_frame(m, 1.0))
        for dim in (0, 1):
            assert rel.multiset(dim) == pad.multiset(dim)

    def test_stability_single_pixel_perturbation(self, rng):
        # Bottleneck distance between diagrams is at most the perturbation.
        eps = 1 / 64
        for _ in range(20):
            vals = rng.integers(0, 8, (6, 6)) / 8
            r, c = rng.integers(0, 6, 2)
            bumped = vals.copy()
            bumped[r, c] = min(1.0, bumped[r, c] + eps)
            a = compute_diagram(LikelihoodMap(vals))
            b = compute_diagram(LikelihoodMap(bumped))
            for dim in (0, 1):
                assert _bottleneck_bound(a.dots(dim), b.dots(dim)) <= eps + 1e-12


def _bottleneck_bound(dots_a, dots_b):
    """Upper bound via the sum-optimal assignment's worst pair (L-inf)."""
    from scipy.optimize import linear_sum_assignment
    n, m = len(dots_a), len(dots_b)
    if n == 0 and m == 0:
        return 0.0
    size = n + m
    cost = np.zeros((size, size))
    for i, p in enumerate(dots_a):
        for j, q in enumerate(dots_b):
            cost[i, j] = max(abs(p.birth - q.birth), abs(p.death - q.death))
    for i, p in enumerate(dots_a):
        cost[i, m:] = p.persistence / 2
    for j, q in enumerate(dots_b):
        cost[n:, j] = q.persistence / 2
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max()


class TestBettiAtThreshold:
    def test_full_ring(self):
        m = ring_mask(12, margin=2, thickness=1).to_likelihood()
        assert betti_at_threshold(m, 0.5) == (1, 1)

    def test_ring_plus_blob(self):
        # Two connected components, one handle.
        m = np.zeros((14, 14))
        ring = ring_mask(9, margin=1, thickness=1).values
        m[:9, :9] = ring
        m[11:13, 11:13] = 1.0
        assert betti_at_threshold(LikelihoodMap(m), 0.5) == (2, 1)

    def test_empty_superlevel(self, rng):
        m = LikelihoodMap(rng.random((5, 5)) * 0.5)
        assert betti_at_threshold(m, 0.9) == (0, 0)

    def test_consistency_with_diagram(self, rng):
        # Counting dots straddling alpha reproduces the Betti numbers.
        for _ in range(25):
            m = LikelihoodMap(rng.integers(0, 8, (8, 8)) / 8)
            alpha = float(rng.random()) * 0.9 + 0.05
            if alpha in np.unique(m.values):
                continue
            d = compute_diagram(m)
            b0, b1 = betti_at_threshold(m, alpha)
            expected0 = sum(1 for dot in d.dots_dim0
                            if dot.death < alpha < dot.birth)
            expected1 = sum(1 for dot in d.dots_dim1
                            if dot.death < alpha < dot.birth)
            essential0 = 1 if alpha <= m.values.max() else 0
            assert b0 == expected0 + essential0
            assert b1 == expected1


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_oracle_equivalence_property(data):
    side = data.draw(st.integers(2, 8))
    cells = data.draw(st.lists(st.integers(0, 8), min_size=side * side,
                               max_size=side * side))
    m = LikelihoodMap(np.array(cells, dtype=float).reshape(side, side) / 8)
    d = compute_diagram(m)
    o = oracle_diagram(m)
    assert d.multiset(0) == o.multiset(0)
    assert d.multiset(1) == o.multiset(1)


def test_two_plateaus_oracle():
    d = oracle_diagram(two_blobs(12, high=0.9, low=0.6))
    assert d.multiset(0) == [(0.6, 0.0)]
    assert d.multiset(1) == []
