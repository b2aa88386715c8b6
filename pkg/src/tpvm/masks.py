"""Spatial modulation masks: per-pixel, per-frame weight fields.

A mask generalizes a viewer's single weight vector to vary across the visor
surface: two-region (inner/outer) partitions for see-through effects,
concentric one-hot rings for the funnel-shaped dig-in view of a slice stack,
and constant alpha schedules for layer blending.

Pixel membership uses the pixel's integer grid coordinate (x = column,
y = row) against closed inequalities, so boundary behavior is deterministic.
Region centers may be real-valued (half-pixel centers are fine); distances
are Euclidean in pixel units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import WeightVector, WeightsLike, _check_unit_range, _frozen_array


@dataclass(frozen=True, eq=False)
class SpatialMask:
    """Read-only (N, M) weight field; row p holds pixel p's weight vector."""

    width: int
    height: int
    m: int
    weights: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.m < 1:
            raise ValueError("width, height and m must be positive")
        arr = _frozen_array(self.weights)
        if arr.shape != (self.width * self.height, self.m):
            raise ValueError(
                f"weights must have shape (N={self.width * self.height}, M={self.m}), "
                f"got {arr.shape}"
            )
        _check_unit_range(arr, "SpatialMask")
        object.__setattr__(self, "weights", arr)

    @property
    def n_pixels(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class Disk:
    """Closed disk: pixels with (x-cx)^2 + (y-cy)^2 <= radius^2."""

    cx: float
    cy: float
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius cannot be negative")

    def member_grid(self, width: int, height: int) -> np.ndarray:
        ys, xs = np.mgrid[0:height, 0:width]
        return (xs - self.cx) ** 2 + (ys - self.cy) ** 2 <= self.radius**2


@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle: x0 <= x <= x1 and y0 <= y <= y1."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError("rectangle corners must be ordered (x0 <= x1, y0 <= y1)")

    def member_grid(self, width: int, height: int) -> np.ndarray:
        ys, xs = np.mgrid[0:height, 0:width]
        return (xs >= self.x0) & (xs <= self.x1) & (ys >= self.y0) & (ys <= self.y1)


def make_region_mask(
    width: int,
    height: int,
    region,
    w_inner: WeightsLike,
    w_outer: WeightsLike,
) -> SpatialMask:
    """Two-region mask: pixels inside `region` get w_inner, the rest w_outer.

    `region` is any geometry with a member_grid(width, height) -> bool array
    method (Disk or Rect here). Every pixel gets exactly one of the two
    vectors; membership is closed (boundary pixels are inside).
    """
    wi = WeightVector.of(w_inner)
    wo = WeightVector.of(w_outer)
    if len(wi) != len(wo):
        raise ValueError(f"inner and outer vectors disagree on M ({len(wi)} vs {len(wo)})")
    inside = region.member_grid(width, height).ravel()
    weights = np.where(inside[:, None], wi.weights[None, :], wo.weights[None, :])
    return SpatialMask(width, height, len(wi), weights)


def make_concentric_mask(
    width: int,
    height: int,
    center: tuple,
    m: int,
    profile,
    mapping: str = "identity",
) -> SpatialMask:
    """Concentric one-hot rings for a funnel view into a slice stack.

    `profile` lists M strictly ascending radius thresholds. A pixel at
    Euclidean distance d from `center` (cx, cy) selects ring j, the smallest
    index with d <= profile[j]; pixels past the last threshold fall in the
    last ring. Ring j shows slice j under the default "identity" mapping, or
    slice M-1-j under "reversed".
    """
    profile = np.asarray(profile, dtype=np.float64)
    if profile.shape != (m,):
        raise ValueError(f"profile must list exactly {m} radii, got shape {profile.shape}")
    if m > 1 and not np.all(np.diff(profile) > 0):
        raise ValueError("profile radii must be strictly ascending")
    if mapping not in ("identity", "reversed"):
        raise ValueError(f"unknown ring mapping {mapping!r}")
    cx, cy = center
    ys, xs = np.mgrid[0:height, 0:width]
    d = np.sqrt((xs - cx) ** 2 + (ys - cy) ** 2).ravel()
    ring = np.searchsorted(profile, d, side="left")
    ring = np.minimum(ring, m - 1)  # beyond the outermost threshold: last ring
    slice_idx = ring if mapping == "identity" else (m - 1) - ring
    weights = np.zeros((width * height, m))
    weights[np.arange(weights.shape[0]), slice_idx] = 1.0
    return SpatialMask(width, height, m, weights)


def alpha_blend_mask(width: int, height: int, m: int, alphas) -> SpatialMask:
    """Constant mask: every pixel blends frame j at weight alphas[j]."""
    alphas = np.asarray(alphas, dtype=np.float64)
    if alphas.shape != (m,):
        raise ValueError(f"need exactly {m} alphas, got shape {alphas.shape}")
    _check_unit_range(alphas, "alphas")
    weights = np.tile(alphas, (width * height, 1))
    return SpatialMask(width, height, m, weights)
