"""Bundle container: the binary interchange format and the UI JSON export.

Binary layout (little-endian, version 1):

    magic  b"TPVM"
    u32    version (1)
    u32    width
    u32    height
    u32    M (atom frames)
    u32    K (weight columns / viewers)
    u8     fusion mode (0 = sum, 1 = mean)
    u8     mask present (0/1)
    f64[]  X, N*M, frame-major (frame 0's N pixels row-major, then frame 1, ...)
    f64[]  W, M*K, column-major (viewer 0's M weights, then viewer 1, ...)
    f64[]  mask, N*M, pixel-major (pixel 0's M weights, ...), only if present

float64 payloads keep solver outputs bit-exact across a write/read trip.
Reading validates magic, version, and the [0,1] range of every payload.
In-memory metadata (seed, solver settings) is not part of the v1 binary
layout; it survives only in the JSON export.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .masks import SpatialMask
from .model import Factorization, Image, perceive

_MAGIC = b"TPVM"
_VERSION = 1
_HEADER = struct.Struct("<4s5I2B")
_MODE_CODES = {"sum": 0, "mean": 1}
_MODE_NAMES = {code: name for name, code in _MODE_CODES.items()}


class BundleError(Exception):
    """Base class for bundle codec failures."""


class BadMagicError(BundleError):
    """Leading bytes are not the bundle magic."""


class UnsupportedVersionError(BundleError):
    """Bundle version is not one this reader understands."""


class TruncatedBundleError(BundleError):
    """File is shorter than its header promises."""


class BundleInvariantError(BundleError):
    """Payload violates a range invariant (entries outside [0,1])."""


@dataclass(frozen=True, eq=False)
class Bundle:
    """Atom frames, weights, and an optional spatial mask, ready to ship."""

    frames: tuple
    weights: np.ndarray
    fusion_mode: str = "sum"
    mask: SpatialMask | None = None
    metadata: dict | None = None

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise ValueError("bundle needs at least one atom frame")
        w, h = frames[0].width, frames[0].height
        for im in frames[1:]:
            if im.width != w or im.height != h:
                raise ValueError("atom frames must share dimensions")
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if weights.ndim != 2 or weights.shape[0] != len(frames):
            raise ValueError(
                f"weights must be (M={len(frames)}) x K, got shape {weights.shape}"
            )
        if weights.size and (weights.min() < 0.0 or weights.max() > 1.0):
            raise ValueError("weight entries must lie in [0, 1]")
        weights.flags.writeable = False
        if self.fusion_mode not in _MODE_CODES:
            raise ValueError(f"unknown fusion mode {self.fusion_mode!r}")
        if self.mask is not None:
            if (self.mask.width, self.mask.height, self.mask.m) != (w, h, len(frames)):
                raise ValueError("mask dimensions must match the atom frames")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "weights", weights)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def m(self) -> int:
        return len(self.frames)

    @property
    def k(self) -> int:
        return self.weights.shape[1]

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @classmethod
    def from_factorization(
        cls, f: Factorization, fusion_mode: str = "sum", metadata: dict | None = None
    ) -> "Bundle":
        return cls(
            frames=f.atom_frames,
            weights=f.weight_matrix,
            fusion_mode=fusion_mode,
            metadata=metadata,
        )

    def with_mask(self, mask: SpatialMask) -> "Bundle":
        return Bundle(self.frames, self.weights, self.fusion_mode, mask, self.metadata)


def write_bundle(bundle: Bundle, path) -> None:
    """Serialize to the binary layout; payloads survive bit-exactly."""
    header = _HEADER.pack(
        _MAGIC,
        _VERSION,
        bundle.width,
        bundle.height,
        bundle.m,
        bundle.k,
        _MODE_CODES[bundle.fusion_mode],
        0 if bundle.mask is None else 1,
    )
    parts = [header]
    # frame-major: each frame's pixels are contiguous
    parts.append(np.concatenate([im.flat for im in bundle.frames]).astype("<f8").tobytes())
    parts.append(bundle.weights.ravel(order="F").astype("<f8").tobytes())
    if bundle.mask is not None:
        parts.append(np.ascontiguousarray(bundle.mask.weights).astype("<f8").tobytes())
    Path(path).write_bytes(b"".join(parts))


def read_bundle(path) -> Bundle:
    """Read and validate a binary bundle."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        if not data.startswith(_MAGIC):
            raise BadMagicError("file too short to hold the bundle magic")
        raise TruncatedBundleError("file shorter than the bundle header")
    magic, version, width, height, m, k, mode_code, mask_flag = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {_MAGIC!r}")
    if version != _VERSION:
        raise UnsupportedVersionError(f"bundle version {version}, reader supports {_VERSION}")
    if mode_code not in _MODE_NAMES:
        raise BundleInvariantError(f"unknown fusion-mode code {mode_code}")
    if width < 1 or height < 1 or m < 1 or k < 1:
        raise BundleInvariantError("dimensions must be positive")
    n = width * height
    want = n * m + m * k + (n * m if mask_flag else 0)
    avail = len(data) - _HEADER.size
    if avail != want * 8:
        raise TruncatedBundleError(f"payload holds {avail} bytes, header promises {want * 8}")
    floats = np.frombuffer(data, dtype="<f8", count=want, offset=_HEADER.size)

    x_flat = floats[: n * m]
    w_flat = floats[n * m : n * m + m * k]
    _check_range(x_flat, "atom frame")
    _check_range(w_flat, "weight")
    try:
        frames = tuple(
            Image.from_flat(width, height, x_flat[j * n : (j + 1) * n]) for j in range(m)
        )
        weights = w_flat.reshape((m, k), order="F")
        mask = None
        if mask_flag:
            mask_flat = floats[n * m + m * k :]
            _check_range(mask_flat, "mask")
            mask = SpatialMask(width, height, m, mask_flat.reshape(n, m))
        return Bundle(frames, weights, _MODE_NAMES[mode_code], mask)
    except ValueError as exc:
        raise BundleInvariantError(str(exc)) from exc


def _check_range(arr: np.ndarray, what: str) -> None:
    if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0):
        raise BundleInvariantError(f"{what} entries must be finite and lie in [0, 1]")


def export_ui_bundle(bundle: Bundle, golden_weights: Sequence, path) -> dict:
    """Write the JSON document the browser explorer consumes.

    Each entry of golden_weights (length-M vectors) becomes a golden record
    holding the weights and the fused image computed here, which the client
    renderer replays for parity checks. Numbers keep full precision (json uses
    shortest round-trip decimals). Returns the exported document.
    """
    golden = []
    for w in golden_weights:
        w = np.asarray(w, dtype=np.float64)
        fused = perceive(bundle.frames, w, bundle.fusion_mode)
        golden.append({"weights": w.tolist(), "fusedImage": fused.image.flat.tolist()})
    doc = {
        "width": bundle.width,
        "height": bundle.height,
        "M": bundle.m,
        "K": bundle.k,
        "fusionMode": bundle.fusion_mode,
        "frames": [im.flat.tolist() for im in bundle.frames],
        "weights": bundle.weights.tolist(),
        "golden": golden,
    }
    if bundle.mask is not None:
        doc["masks"] = bundle.mask.weights.tolist()
    if bundle.metadata is not None:
        doc["metadata"] = bundle.metadata
    Path(path).write_text(json.dumps(doc))
    return doc


def default_golden_weights(bundle: Bundle) -> list:
    """Golden probe set: normal view, black, each single frame, each viewer."""
    m = bundle.m
    probes = [np.ones(m), np.zeros(m)]
    probes.extend(np.eye(m)[j] for j in range(m))
    probes.extend(bundle.weights[:, k] for k in range(bundle.k))
    return probes
