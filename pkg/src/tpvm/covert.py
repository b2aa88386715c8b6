"""Normal-view/shale-view bifurcation design.

Two constructions over M=2 atom frames:

* design_covert_noise hides a secret image behind a noise normal view. The
  first atom frame IS the secret; the second lifts each pixel by a seeded
  uniform amount so the bare-eye fusion looks like noise while weights (1,0)
  recover the secret bit-exactly. The noise band [secret, 1] per pixel keeps
  the second frame inside the displayable range analytically, so nothing is
  ever clamped.

* design_dual_view solves the general two-target problem (default view for
  unaided eyes, annotated/alternate view through a modulated device) with the
  normal-view weight column pinned to all-ones.

The camouflage is imperfect by construction (brighter secret pixels force a
brighter noise floor); the Pearson correlation between normal view and secret
is measured and reported as `leakage` rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import quality_report
from .model import Factorization, FusedView, Image, TargetSet, perceive
from .solver import PinSpec, SolverConfig, factorize


@dataclass(frozen=True, eq=False)
class BifurcationResult:
    """A designed normal-view/shale-view pair plus diagnostics.

    leakage is the Pearson correlation between normal-view and secret pixels;
    feasibility_report counts pixels clamped while forming the views.
    """

    factorization: Factorization
    normal_view_image: Image
    shale_view_image: Image
    leakage: float
    feasibility_report: int
    per_view_rmse: tuple = ()


def leakage_correlation(normal: Image, secret: Image) -> float:
    """Pearson correlation of the two pixel vectors; 0 if either is constant."""
    if normal.width != secret.width or normal.height != secret.height:
        raise ValueError("images must share dimensions")
    a = normal.flat
    b = secret.flat
    if a.size < 2:
        raise ValueError("need at least 2 pixels to correlate")
    da = a - a.mean()
    db = b - b.mean()
    sa = float(np.sqrt(np.dot(da, da)))
    sb = float(np.sqrt(np.dot(db, db)))
    if sa == 0.0 or sb == 0.0:
        return 0.0
    return float(np.dot(da, db) / (sa * sb))


def _leakage_or_zero(normal: Image, secret: Image) -> float:
    # single-pixel views have no variance; fall back to the constant convention
    if normal.n_pixels < 2:
        return 0.0
    return leakage_correlation(normal, secret)


def design_covert_noise(secret: Image, seed: int = 0) -> BifurcationResult:
    """Camouflage a secret image as noise visible only through weights (1, 0).

    Per pixel, the noise target is drawn uniform on [secret, 1] as
    secret + (1 - secret) * u with u ~ U[0,1), which makes the fused normal
    view reproduce the drawn noise image bitwise (frame 2 stores exactly the
    increment the fusion adds back). W columns are (1,1) for the normal view
    and (1,0) for the shale view. No pixel is ever clamped.
    """
    rng = np.random.default_rng(seed)
    y1 = secret.flat
    u = rng.random(y1.size)
    x2 = (1.0 - y1) * u  # in [0, 1-secret], so the sum never leaves [0, 1]
    frames = (secret, Image.from_flat(secret.width, secret.height, x2))
    w = np.array([[1.0, 1.0], [1.0, 0.0]])
    fact = Factorization(atom_frames=frames, weight_matrix=w)

    normal: FusedView = perceive(frames, w[:, 0], "sum")
    shale: FusedView = perceive(frames, w[:, 1], "sum")
    return BifurcationResult(
        factorization=fact,
        normal_view_image=normal.image,
        shale_view_image=shale.image,
        leakage=_leakage_or_zero(normal.image, secret),
        feasibility_report=normal.clamped_count + shale.clamped_count,
        per_view_rmse=_view_rmse(TargetSet((normal.image, secret)), fact),
    )


def design_dual_view(
    default: Image,
    shale: Image,
    cfg: SolverConfig = SolverConfig(),
    pin_shale: bool = True,
) -> BifurcationResult:
    """Solve for two frames whose bare-eye fusion is `default` and whose
    (1,0)-modulated fusion is `shale`.

    The weight column for the default view is pinned to (1,1) (all frames
    unattenuated). By default the shale column is pinned to (1,0), which keeps
    the shale view exactly the first atom frame for maximum legibility; pass
    pin_shale=False to let the solver choose it.
    """
    if default.width != shale.width or default.height != shale.height:
        raise ValueError("default and shale images must share dimensions")
    targets = TargetSet((default, shale))
    pins = PinSpec.column(2, 2, 0, np.array([1.0, 1.0]))
    if pin_shale:
        pins = pins.merge(PinSpec.column(2, 2, 1, np.array([1.0, 0.0])))
    fact = factorize(targets, 2, pins=pins, cfg=cfg)

    frames = fact.atom_frames
    normal = perceive(frames, fact.weight_matrix[:, 0], "sum")
    shale_view = perceive(frames, fact.weight_matrix[:, 1], "sum")
    return BifurcationResult(
        factorization=fact,
        normal_view_image=normal.image,
        shale_view_image=shale_view.image,
        leakage=_leakage_or_zero(normal.image, shale),
        feasibility_report=normal.clamped_count + shale_view.clamped_count,
        per_view_rmse=_view_rmse(targets, fact),
    )


def _view_rmse(targets: TargetSet, fact: Factorization) -> tuple:
    report = quality_report(targets, fact, "sum")
    return tuple(report.per_target_rmse)
