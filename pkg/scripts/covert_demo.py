#!/usr/bin/env python3
"""End-to-end covert display demo.

Synthesizes a glyph-like secret image, hides it behind a noise normal view,
and writes everything a viewer (or the browser explorer) needs:

    out/secret.pgm        the hidden message
    out/normal_view.pgm   what unaided eyes see (noise)
    out/shale_view.pgm    what the (1,0)-modulated device sees
    out/covert.tpvm       the bundle driving display + device
    out/ui/bundle.json    explorer export with golden vectors
"""

import argparse
from pathlib import Path

import numpy as np

from tpvm.bundle import Bundle, default_golden_weights, export_ui_bundle, write_bundle
from tpvm.covert import design_covert_noise
from tpvm.netpbm import write_pgm


def glyph_secret(side: int) -> "np.ndarray":
    """A bright cross + border on a dark background; easy to recognize."""
    img = np.full((side, side), 0.08)
    c = side // 2
    img[c - 1 : c + 2, 2 : side - 2] = 0.9
    img[2 : side - 2, c - 1 : c + 2] = 0.9
    img[1, 1 : side - 1] = 0.6
    img[side - 2, 1 : side - 1] = 0.6
    img[1 : side - 1, 1] = 0.6
    img[1 : side - 1, side - 2] = 0.6
    return img


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--side", type=int, default=48)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="out")
    args = ap.parse_args()

    from tpvm.model import Image

    secret = Image(args.side, args.side, glyph_secret(args.side))
    res = design_covert_noise(secret, seed=args.seed)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_pgm(secret, out / "secret.pgm")
    write_pgm(res.normal_view_image, out / "normal_view.pgm")
    write_pgm(res.shale_view_image, out / "shale_view.pgm")

    bundle = Bundle.from_factorization(res.factorization, metadata={"seed": args.seed})
    write_bundle(bundle, out / "covert.tpvm")
    (out / "ui").mkdir(exist_ok=True)
    export_ui_bundle(bundle, default_golden_weights(bundle), out / "ui" / "bundle.json")

    print(f"secret hidden behind noise: leakage correlation {res.leakage:+.4f}, "
          f"{res.feasibility_report} clamped pixels")
    print(f"outputs in {out}/")


if __name__ == "__main__":
    main()
