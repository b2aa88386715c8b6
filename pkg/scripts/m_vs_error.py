#!/usr/bin/env python3
"""Reconstruction error as a function of the atom-frame budget M.

Factorizes a fixed set of K synthetic targets for M = 1..M_MAX and reports
the relative Frobenius residual and per-target PSNR at each M. The curve is
reported as measured; no convergence rate is asserted. Writes a table to
stdout and a plot to out/m_vs_error.png.
"""

import argparse
from pathlib import Path

import numpy as np

from tpvm.metrics import quality_report
from tpvm.model import Image, TargetSet
from tpvm.solver import SolverConfig, factorize


def synthetic_targets(side: int, k: int, seed: int) -> TargetSet:
    """Smooth, partially overlapping blobs so targets share structure."""
    rng = np.random.default_rng(seed)
    ys, xs = np.mgrid[0:side, 0:side]
    images = []
    for _ in range(k):
        cx, cy = rng.uniform(side * 0.25, side * 0.75, size=2)
        sigma = rng.uniform(side * 0.15, side * 0.35)
        blob = np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * sigma**2))
        ramp = rng.uniform(0.1, 0.4) * xs / (side - 1)
        img = 0.6 * blob + ramp
        images.append(Image(side, side, img / max(img.max(), 1.0)))
    return TargetSet(tuple(images))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--side", type=int, default=16, help="target side length in pixels")
    ap.add_argument("--targets", type=int, default=3, help="number of target images K")
    ap.add_argument("--max-frames", type=int, default=8, help="largest M to try")
    ap.add_argument("--seed", type=int, default=1, help="target synthesis / solver seed")
    ap.add_argument("--out", default="out", help="output directory")
    args = ap.parse_args()

    ts = synthetic_targets(args.side, args.targets, args.seed)
    norm_y = np.linalg.norm(ts.matrix, "fro")
    cfg = SolverConfig(max_iterations=1500, rel_tolerance=1e-10, seed=args.seed, restarts=2)

    ms, residuals = [], []
    print(f"{'M':>3} {'rel residual':>14} {'min PSNR (dB)':>14} {'iters':>6}")
    for m in range(1, args.max_frames + 1):
        f = factorize(ts, m, cfg=cfg)
        rel = f.objective_history[-1] / norm_y
        report = quality_report(ts, f, "sum")
        min_psnr = min(report.per_target_psnr_db)
        ms.append(m)
        residuals.append(rel)
        print(f"{m:>3} {rel:>14.3e} {min_psnr:>14.2f} {len(f.objective_history) - 1:>6}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.semilogy(ms, np.maximum(residuals, 1e-17), "o-")
        ax.set_xlabel("atom frames M")
        ax.set_ylabel("relative Frobenius residual")
        ax.set_title(f"K={args.targets} targets, {args.side}x{args.side}")
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
        fig.savefig(out_dir / "m_vs_error.png", dpi=150)
        print(f"plot: {out_dir / 'm_vs_error.png'}")
    except ImportError:
        print("matplotlib not available; skipped the plot")


if __name__ == "__main__":
    main()
