"""Core domain types and the temporal fusion simulator.

A high-refresh display cycles M atom frames per flicker-fusion period; a
synchronized viewing device attenuates each atom frame by a weight in [0,1]
and the visual system integrates the result. Perceived output is therefore a
per-pixel linear combination of the atom frames, either summed ("sum" mode,
the matrix-product convention) or time-averaged ("mean" mode, sum divided
by M). Outputs are clamped to [0,1]; clamping is reported, never silent.

All types are immutable after construction (arrays are frozen read-only) and
every operation is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

FUSION_MODES = ("sum", "mean")

WeightsLike = Union["WeightVector", Sequence[float], np.ndarray]


def _check_mode(mode: str) -> str:
    if mode not in FUSION_MODES:
        raise ValueError(f"unknown fusion mode {mode!r}; expected one of {FUSION_MODES}")
    return mode


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    """Copy into a C-contiguous read-only array so dataclasses stay immutable."""
    arr = np.ascontiguousarray(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


def _check_unit_range(arr: np.ndarray, name: str) -> None:
    if arr.size and (np.min(arr) < 0.0 or np.max(arr) > 1.0 or not np.all(np.isfinite(arr))):
        raise ValueError(f"{name} entries must be finite and lie in [0, 1]")


@dataclass(frozen=True)
class DisplayConfig:
    """Display timing: refresh rate, flicker-fusion rate, and frames per cycle.

    frames_per_cycle must satisfy refresh_rate_hz = frames_per_cycle *
    flicker_fusion_hz exactly; non-integer ratios are rejected.
    """

    refresh_rate_hz: float
    flicker_fusion_hz: float
    frames_per_cycle: int

    def __post_init__(self):
        if self.refresh_rate_hz <= 0 or self.flicker_fusion_hz <= 0:
            raise ValueError("refresh and flicker-fusion rates must be positive")
        if self.frames_per_cycle < 1 or self.frames_per_cycle != int(self.frames_per_cycle):
            raise ValueError("frames_per_cycle must be a positive integer")
        if self.flicker_fusion_hz * self.frames_per_cycle != self.refresh_rate_hz:
            raise ValueError(
                "refresh rate must equal frames_per_cycle * flicker_fusion_hz exactly "
                f"({self.refresh_rate_hz} != {self.frames_per_cycle} * {self.flicker_fusion_hz})"
            )

    @classmethod
    def derive(cls, refresh_rate_hz: float, flicker_fusion_hz: float) -> "DisplayConfig":
        """Derive frames_per_cycle from the two rates; rejects non-integer ratios."""
        if flicker_fusion_hz <= 0:
            raise ValueError("flicker_fusion_hz must be positive")
        m = int(round(refresh_rate_hz / flicker_fusion_hz))
        return cls(refresh_rate_hz, flicker_fusion_hz, max(m, 1))


@dataclass(frozen=True, eq=False)
class Image:
    """Grayscale image with intensities in [0,1], stored row-major.

    `data` is a read-only (height, width) float64 array; `flat` is the
    raveled length-N view (N = width * height) used by the matrix algebra.
    """

    width: int
    height: int
    data: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be positive")
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.size != self.width * self.height:
            raise ValueError(
                f"data has {arr.size} entries, expected {self.width * self.height}"
            )
        arr = _frozen_array(arr.reshape(self.height, self.width))
        _check_unit_range(arr, "Image")
        object.__setattr__(self, "data", arr)

    @property
    def flat(self) -> np.ndarray:
        return self.data.ravel()

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @classmethod
    def from_flat(cls, width: int, height: int, flat) -> "Image":
        return cls(width, height, np.asarray(flat, dtype=np.float64))

    @classmethod
    def zeros(cls, width: int, height: int) -> "Image":
        return cls(width, height, np.zeros((height, width)))


@dataclass(frozen=True, eq=False)
class TargetSet:
    """Ordered set of K same-sized target images (columns of the target matrix)."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        if not imgs:
            raise ValueError("TargetSet needs at least one image")
        w, h = imgs[0].width, imgs[0].height
        for im in imgs[1:]:
            if im.width != w or im.height != h:
                raise ValueError("all target images must share the same dimensions")
        object.__setattr__(self, "images", imgs)

    @property
    def k(self) -> int:
        return len(self.images)

    @property
    def width(self) -> int:
        return self.images[0].width

    @property
    def height(self) -> int:
        return self.images[0].height

    @property
    def n_pixels(self) -> int:
        return self.images[0].n_pixels

    @cached_property
    def matrix(self) -> np.ndarray:
        """(N, K) matrix whose column k is target image k, read-only."""
        return _frozen_array(np.column_stack([im.flat for im in self.images]))


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Per-frame modulation weights, each in [0,1]."""

    weights: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(np.atleast_1d(self.weights))
        if arr.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        _check_unit_range(arr, "WeightVector")
        object.__setattr__(self, "weights", arr)

    def __len__(self) -> int:
        return len(self.weights)

    @classmethod
    def of(cls, w: WeightsLike) -> "WeightVector":
        return w if isinstance(w, WeightVector) else cls(np.asarray(w, dtype=np.float64))

    @classmethod
    def ones(cls, m: int) -> "WeightVector":
        return cls(np.ones(m))


@dataclass(frozen=True, eq=False)
class Factorization:
    """Atom frames plus modulation matrix, as produced by the solver.

    atom_frames holds the M basis images (columns of the N x M frame matrix);
    weight_matrix is M x K with viewer k's weights in column k. pin_mask marks
    weight entries that were held fixed during optimization. objective_history
    lists the Frobenius residual after init and after each accepted iteration
    and is non-increasing by construction.
    """

    atom_frames: tuple
    weight_matrix: np.ndarray
    pin_mask: np.ndarray | None = None
    objective_history: tuple = ()
    stop_reason: str | None = None

    def __post_init__(self):
        frames = tuple(self.atom_frames)
        if not frames:
            raise ValueError("need at least one atom frame")
        w, h = frames[0].width, frames[0].height
        for im in frames[1:]:
            if im.width != w or im.height != h:
                raise ValueError("atom frames must share dimensions")
        wm = _frozen_array(self.weight_matrix)
        if wm.ndim != 2 or wm.shape[0] != len(frames):
            raise ValueError(
                f"weight_matrix must be (M={len(frames)}) x K, got shape {wm.shape}"
            )
        _check_unit_range(wm, "weight_matrix")
        pins = self.pin_mask
        if pins is None:
            pins = np.zeros(wm.shape, dtype=bool)
        pins = _frozen_array(pins, dtype=bool)
        if pins.shape != wm.shape:
            raise ValueError("pin_mask shape must match weight_matrix")
        hist = tuple(float(v) for v in self.objective_history)
        for prev, cur in zip(hist, hist[1:]):
            if cur > prev:
                raise ValueError("objective_history must be non-increasing")
        object.__setattr__(self, "atom_frames", frames)
        object.__setattr__(self, "weight_matrix", wm)
        object.__setattr__(self, "pin_mask", pins)
        object.__setattr__(self, "objective_history", hist)

    @property
    def m(self) -> int:
        return len(self.atom_frames)

    @property
    def k(self) -> int:
        return self.weight_matrix.shape[1]

    @property
    def width(self) -> int:
        return self.atom_frames[0].width

    @property
    def height(self) -> int:
        return self.atom_frames[0].height

    @cached_property
    def frame_matrix(self) -> np.ndarray:
        """(N, M) matrix whose column m is atom frame m, read-only."""
        return _frozen_array(np.column_stack([im.flat for im in self.atom_frames]))


@dataclass(frozen=True, eq=False)
class FusedView:
    """Result of a fusion: clamped image plus clamping diagnostics."""

    image: Image
    overflow: bool
    clamped_count: int


def frame_matrix(frames: Sequence[Image]) -> np.ndarray:
    """Stack atom frames into the (N, M) matrix with frames as columns."""
    frames = tuple(frames)
    if not frames:
        raise ValueError("need at least one atom frame")
    w, h = frames[0].width, frames[0].height
    for im in frames[1:]:
        if im.width != w or im.height != h:
            raise ValueError("atom frames must share dimensions")
    return np.column_stack([im.flat for im in frames])


def perceive(frames: Sequence[Image], w: WeightsLike, mode: str = "sum") -> FusedView:
    """Fuse atom frames under a single weight vector.

    "sum" computes sum_m w[m] * frame_m per pixel (matrix-product convention);
    "mean" divides that sum by M. Output is clamped to [0,1] and the view
    reports whether any pre-clamp value exceeded 1.
    """
    _check_mode(mode)
    wv = WeightVector.of(w)
    x = frame_matrix(frames)
    if len(wv) != x.shape[1]:
        raise ValueError(f"weight vector has length {len(wv)}, expected {x.shape[1]}")
    raw = x @ wv.weights
    if mode == "mean":
        raw = raw / x.shape[1]
    clamped = int(np.count_nonzero(raw > 1.0))
    out = np.clip(raw, 0.0, 1.0)
    img = Image.from_flat(frames[0].width, frames[0].height, out)
    return FusedView(image=img, overflow=clamped > 0, clamped_count=clamped)


def normal_view(frames: Sequence[Image], mode: str = "sum") -> FusedView:
    """Unaided-eye view: every atom frame fused at weight 1."""
    frames = tuple(frames)
    return perceive(frames, WeightVector.ones(len(frames)), mode)


def perceive_spatial(frames: Sequence[Image], mask, mode: str = "sum") -> FusedView:
    """Fuse atom frames under a per-pixel weight field.

    `mask` provides an (N, M) weight array (e.g. a SpatialMask); pixel p of
    the output is sum_m mask[p, m] * frame_m[p], with the same mode and
    clamping behavior as `perceive`.
    """
    _check_mode(mode)
    frames = tuple(frames)
    x = frame_matrix(frames)
    weights = np.asarray(getattr(mask, "weights", mask), dtype=np.float64)
    if weights.shape != x.shape:
        raise ValueError(
            f"mask weights have shape {weights.shape}, expected {x.shape} (N, M)"
        )
    raw = np.sum(weights * x, axis=1)
    if mode == "mean":
        raw = raw / x.shape[1]
    clamped = int(np.count_nonzero(raw > 1.0))
    out = np.clip(raw, 0.0, 1.0)
    img = Image.from_flat(frames[0].width, frames[0].height, out)
    return FusedView(image=img, overflow=clamped > 0, clamped_count=clamped)
