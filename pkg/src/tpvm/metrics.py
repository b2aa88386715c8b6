"""Reconstruction quality and weight-bandwidth reports.

RMSE is taken per target view against the fused (clamped) output; PSNR uses
peak 1.0, so psnr_db = -20*log10(rmse), with math.inf as the exact-match
sentinel (serialized as the string "inf"). The bandwidth report quantifies
the payload advantage of shipping M weights per view instead of N pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Factorization, TargetSet, perceive
from .solver import objective


@dataclass(frozen=True, eq=False)
class QualityReport:
    per_target_rmse: tuple
    per_target_psnr_db: tuple
    frobenius_total: float
    overflow_pixel_counts: tuple

    def to_json_dict(self) -> dict:
        return {
            "perTargetRmse": list(self.per_target_rmse),
            "perTargetPsnrDb": ["inf" if math.isinf(p) else p for p in self.per_target_psnr_db],
            "frobeniusTotal": self.frobenius_total,
            "overflowPixelCounts": list(self.overflow_pixel_counts),
        }


@dataclass(frozen=True)
class BandwidthReport:
    weights_rate: float
    pixel_rate: float
    ratio: float

    def to_json_dict(self) -> dict:
        return {
            "weightsRate": self.weights_rate,
            "pixelRate": self.pixel_rate,
            "ratio": self.ratio,
        }


def psnr_db(rmse: float) -> float:
    """PSNR in dB for intensities with peak 1; +inf for an exact match."""
    if rmse < 0:
        raise ValueError("rmse cannot be negative")
    if rmse == 0.0:
        return math.inf
    return -20.0 * math.log10(rmse)


def quality_report(y: TargetSet, f: Factorization, mode: str = "sum") -> QualityReport:
    """Compare each target against its fused reconstruction.

    frobenius_total is the raw (un-clamped) Frobenius residual of Y - XW, so
    in sum mode without clamping frobenius_total^2 == sum_k N * rmse_k^2.
    """
    frob = objective(y, f)  # also validates dimensions
    n = y.n_pixels
    rmses = []
    psnrs = []
    overflow = []
    for k in range(y.k):
        fused = perceive(f.atom_frames, f.weight_matrix[:, k], mode)
        err = fused.image.flat - y.images[k].flat
        rmse = float(np.sqrt(np.dot(err, err) / n))
        rmses.append(rmse)
        psnrs.append(psnr_db(rmse))
        overflow.append(fused.clamped_count)
    return QualityReport(
        per_target_rmse=tuple(rmses),
        per_target_psnr_db=tuple(psnrs),
        frobenius_total=frob,
        overflow_pixel_counts=tuple(overflow),
    )


def bandwidth_report(
    n_pixels: int, m: int, k_viewers: int, views_per_second: float
) -> BandwidthReport:
    """Weights-vs-pixels channel rates for driving K viewing devices."""
    if n_pixels <= 0 or m <= 0 or k_viewers <= 0 or views_per_second <= 0:
        raise ValueError("all bandwidth inputs must be positive")
    return BandwidthReport(
        weights_rate=m * k_viewers * views_per_second,
        pixel_rate=n_pixels * k_viewers * views_per_second,
        ratio=m / n_pixels,
    )
