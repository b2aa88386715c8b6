#!/usr/bin/env python3
"""Volume dig-in and see-through demos with spatial masks.

Builds M synthetic depth slices, then renders:

  * a funnel view through a concentric one-hot mask (each ring of the visor
    shows a different depth slice), and
  * an inner/outer see-through view: the inner disk shows the deepest slice
    while the surroundings show the shallowest, i.e. w_inner=(0,...,0,1),
    w_outer=(1,0,...,0).

Writes PGMs plus a mask-carrying bundle into out/.
"""

import argparse
from pathlib import Path

import numpy as np

from tpvm.bundle import Bundle, write_bundle
from tpvm.masks import Disk, make_concentric_mask, make_region_mask
from tpvm.model import Image, perceive_spatial
from tpvm.netpbm import write_pgm


def depth_slices(side: int, m: int) -> tuple:
    """Each slice carries a distinct texture so ring boundaries are visible."""
    ys, xs = np.mgrid[0:side, 0:side]
    slices = []
    for j in range(m):
        freq = 2 * np.pi * (j + 1) / side
        tex = 0.5 + 0.45 * np.sin(freq * xs * np.cos(j) + freq * ys * np.sin(j))
        # darken toward depth so the funnel reads as depth
        slices.append(Image(side, side, tex * (1.0 - 0.12 * j)))
    return tuple(slices)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--side", type=int, default=64)
    ap.add_argument("--frames", type=int, default=4)
    ap.add_argument("--out", default="out")
    args = ap.parse_args()

    side, m = args.side, args.frames
    frames = depth_slices(side, m)
    center = ((side - 1) / 2, (side - 1) / 2)
    step = side / (2 * m)
    profile = [step * (j + 1) for j in range(m)]

    funnel = make_concentric_mask(side, side, center, m, profile)
    funnel_view = perceive_spatial(frames, funnel, "sum")

    w_inner = np.eye(m)[m - 1]  # deepest slice inside
    w_outer = np.eye(m)[0]      # shallowest outside
    region = make_region_mask(side, side, Disk(center[0], center[1], side / 4), w_inner, w_outer)
    see_through = perceive_spatial(frames, region, "sum")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for j, f in enumerate(frames):
        write_pgm(f, out / f"slice_{j}.pgm")
    write_pgm(funnel_view.image, out / "funnel_view.pgm")
    write_pgm(see_through.image, out / "see_through_view.pgm")

    bundle = Bundle(frames, np.ones((m, 1)), "sum", funnel)
    write_bundle(bundle, out / "funnel.tpvm")
    print(f"{m} slices, funnel rings at radii {['%.1f' % r for r in profile]}")
    print(f"outputs in {out}/")


if __name__ == "__main__":
    main()
