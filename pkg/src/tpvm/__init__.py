"""Temporal psychovisual modulation toolkit.

Synthesizes atom frames and modulation weights for high-refresh displays via
box-constrained NMF, simulates the display -> viewing-device -> visual-fusion
chain (globally and through per-pixel spatial masks), and designs
normal-view/shale-view bifurcations for covert and annotated displays.
"""

from .bundle import Bundle, export_ui_bundle, read_bundle, write_bundle
from .covert import (
    BifurcationResult,
    design_covert_noise,
    design_dual_view,
    leakage_correlation,
)
from .masks import Disk, Rect, SpatialMask, alpha_blend_mask, make_concentric_mask, make_region_mask
from .metrics import BandwidthReport, QualityReport, bandwidth_report, quality_report
from .model import (
    DisplayConfig,
    Factorization,
    FusedView,
    Image,
    TargetSet,
    WeightVector,
    normal_view,
    perceive,
    perceive_spatial,
)
from .netpbm import read_image, read_pgm, write_image, write_pgm, write_ppm
from .solver import PinSpec, SolverConfig, factorize, initialize, objective, step

__all__ = [
    "BandwidthReport",
    "BifurcationResult",
    "Bundle",
    "Disk",
    "DisplayConfig",
    "Factorization",
    "FusedView",
    "Image",
    "PinSpec",
    "QualityReport",
    "Rect",
    "SolverConfig",
    "SpatialMask",
    "TargetSet",
    "WeightVector",
    "alpha_blend_mask",
    "bandwidth_report",
    "design_covert_noise",
    "design_dual_view",
    "export_ui_bundle",
    "factorize",
    "initialize",
    "leakage_correlation",
    "make_concentric_mask",
    "make_region_mask",
    "normal_view",
    "objective",
    "perceive",
    "perceive_spatial",
    "quality_report",
    "read_bundle",
    "read_image",
    "read_pgm",
    "step",
    "write_bundle",
    "write_image",
    "write_pgm",
    "write_ppm",
]

__version__ = "0.1.0"
