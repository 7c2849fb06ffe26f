"""Grid data types shared by the whole package.

A likelihood map is an H x W grid of reals in [0, 1]; a binary mask is the
same grid restricted to {0, 1}.  Both are immutable after construction so
they can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ValidationError",
    "LikelihoodMap",
    "BinaryMask",
    "Patch",
    "pad_frame",
    "sample_patches",
]


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LikelihoodMap:
    """An H x W grid of real values in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValidationError(f"expected a 2D grid, got shape {arr.shape}")
        if arr.shape[0] < 2 or arr.shape[1] < 2:
            raise ValidationError(f"grid must be at least 2x2, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("grid contains non-finite values")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValidationError("likelihood values must lie in [0, 1]")
        object.__setattr__(self, "values", _freeze(arr))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class BinaryMask:
    """An H x W grid with values in {0, 1}."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.ndim != 2:
            raise ValidationError(f"expected a 2D grid, got shape {arr.shape}")
        if arr.shape[0] < 2 or arr.shape[1] < 2:
            raise ValidationError(f"grid must be at least 2x2, got {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise ValidationError("mask values must be exactly 0 or 1")
        object.__setattr__(self, "values", _freeze(arr.astype(np.uint8)))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def to_likelihood(self) -> LikelihoodMap:
        """View the mask as a binary-valued likelihood map (lossless)."""
        return LikelihoodMap(self.values.astype(np.float64))


#: Side length used for patch-based loss computation.
DEFAULT_PATCH_SIZE = 65


@dataclass(frozen=True)
class Patch:
    """A square window into a parent grid."""

    origin: tuple[int, int]
    size: int
    data: LikelihoodMap | BinaryMask = field(compare=False)


def pad_frame(m: LikelihoodMap, frame_value: float) -> LikelihoodMap:
    """Surround `m` with a one-pixel frame of constant value.

    With frame_value = 1.0 this realizes homology relative to the patch
    boundary: partial structures that touch the border close up against the
    frame and register as handles.
    """
    if not 0.0 <= frame_value <= 1.0:
        raise ValidationError(f"frame value must be in [0, 1], got {frame_value}")
    padded = np.pad(m.values, 1, mode="constant", constant_values=frame_value)
    return LikelihoodMap(padded)


def sample_patches(m: LikelihoodMap | BinaryMask, count: int, size: int,
                   seed: int) -> list[Patch]:
    """Sample `count` uniformly-placed square patches, deterministically.

    A pure function of (grid shape, count, size, seed): calling it with the
    same seed on a prediction and its ground truth yields positionally
    aligned patch lists.
    """
    h, w = m.shape
    if count < 1:
        raise ValidationError(f"count must be >= 1, got {count}")
    if size < 2:
        raise ValidationError(f"patch size must be >= 2, got {size}")
    if size > min(h, w):
        raise ValidationError(
            f"patch size {size} exceeds grid extent {min(h, w)}")
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, h - size + 1, count)
    cols = rng.integers(0, w - size + 1, count)
    cls = LikelihoodMap if isinstance(m, LikelihoodMap) else BinaryMask
    out = []
    for r, c in zip(rows.tolist(), cols.tolist()):
        window = m.values[r:r + size, c:c + size]
        out.append(Patch(origin=(r, c), size=size, data=cls(window)))
    return out
