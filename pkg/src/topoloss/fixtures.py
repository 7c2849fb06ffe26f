"""Synthetic test fixtures: rings, broken rings, branches, figure-eights.

All shapes are axis-aligned (square annuli and straight strokes) so every
pixel value, and therefore every birth/death threshold, is exact.
"""

from __future__ import annotations

import numpy as np

from .grid import BinaryMask, LikelihoodMap, ValidationError

__all__ = ["ring_mask", "broken_ring", "figure_eight_mask", "y_branch_mask",
           "two_blobs", "make_fixture", "FIXTURE_KINDS"]


def _ring_coords(size: int, margin: int | None, thickness: int):
    if margin is None:
        margin = min(10, max(2, size // 6))
    lo, hi = margin, size - 1 - margin
    if hi - lo < 2 * thickness + 1:
        raise ValidationError(f"size {size} too small for ring margin {margin}")
    band = np.zeros((size, size), dtype=bool)
    band[lo:hi + 1, lo:hi + 1] = True
    band[lo + thickness:hi + 1 - thickness, lo + thickness:hi + 1 - thickness] = False
    return band, lo, hi


def ring_mask(size: int = 65, margin: int | None = None,
              thickness: int = 2) -> BinaryMask:
    """A closed square annulus: one component, one handle."""
    band, _, _ = _ring_coords(size, margin, thickness)
    return BinaryMask(band.astype(np.uint8))


def broken_ring(size: int = 65, margin: int | None = None, thickness: int = 2,
                ring_value: float = 0.9, gap_value: float = 0.3,
                gap_width: int = 3) -> LikelihoodMap:
    """A likelihood ring with a shallow gap on its top edge.

    Thresholded at 0.5 the ring is broken; the ground truth is the closed
    `ring_mask` of the same geometry.
    """
    band, lo, hi = _ring_coords(size, margin, thickness)
    values = np.where(band, ring_value, 0.0)
    mid = size // 2
    half = gap_width // 2
    values[lo:lo + thickness, mid - half:mid - half + gap_width] = np.where(
        band[lo:lo + thickness, mid - half:mid - half + gap_width], gap_value, 0.0)
    return LikelihoodMap(values)


def figure_eight_mask(size: int = 16, thickness: int = 1) -> BinaryMask:
    """Two square rings sharing one edge: one component, two handles."""
    mask = np.zeros((size, size), dtype=np.uint8)
    lo, hi = 2, size - 3
    mid = size // 2
    t = thickness
    mask[lo:hi + 1, lo:lo + t] = 1
    mask[lo:hi + 1, hi - t + 1:hi + 1] = 1
    mask[lo:lo + t, lo:hi + 1] = 1
    mask[hi - t + 1:hi + 1, lo:hi + 1] = 1
    mask[lo:hi + 1, mid:mid + t] = 1  # shared wall
    return BinaryMask(mask)


def y_branch_mask(size: int = 65) -> BinaryMask:
    """A branching stroke cropped by the patch border: the trunk and one arm
    leave the patch, the other arm dangles inside.  Against a foreground
    frame this produces exactly two handles."""
    mask = np.zeros((size, size), dtype=np.uint8)
    mid = size // 2
    mask[0:mid + 1, mid] = 1                      # trunk from top border
    arm = min(mid, size - 1 - mid)
    for k in range(arm):                          # arm reaching bottom border
        mask[mid + k, mid - k] = 1
        mask[mid + k, mid - k - 1] = 1            # keep 4-connectivity
    mask[size - 1, mid - arm:mid - arm + 2] = 1
    for k in range(arm // 2):                     # dangling arm, ends inside
        mask[mid + k, mid + k] = 1
        mask[mid + k + 1, mid + k] = 1
    return BinaryMask(mask)


def two_blobs(size: int = 12, high: float = 0.9, low: float = 0.6) -> LikelihoodMap:
    """Two isolated plateaus on a zero background."""
    values = np.zeros((size, size))
    q = size // 4
    values[q:q + 2, q:q + 2] = high
    values[-q - 2:-q, -q - 2:-q] = low
    return LikelihoodMap(values)


FIXTURE_KINDS = ("ring", "broken-ring", "figure-eight", "y-branch", "two-blobs")


def make_fixture(kind: str, size: int = 65, **kwargs):
    if kind == "ring":
        return ring_mask(size=size, **kwargs)
    if kind == "broken-ring":
        return broken_ring(size=size, **kwargs)
    if kind == "figure-eight":
        return figure_eight_mask(size=min(size, 24), **kwargs)
    if kind == "y-branch":
        return y_branch_mask(size=size)
    if kind == "two-blobs":
        return two_blobs(size=min(size, 20), **kwargs)
    raise ValidationError(f"unknown fixture kind {kind!r}; choose from {FIXTURE_KINDS}")
