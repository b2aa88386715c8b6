"""Command-line interface.

Subcommands: factorize, covert, dual, perceive, mask, metrics, export-ui.
Machine-readable JSON goes to stdout; all diagnostics go to stderr.

Exit codes: 0 success, 1 usage error (bad flags, inconsistent inputs),
2 I/O or file-format error, 3 numeric/invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bundle as bundle_io
from . import masks as masks_mod
from . import metrics as metrics_mod
from . import netpbm
from .covert import design_covert_noise, design_dual_view
from .model import Factorization, TargetSet, perceive, perceive_spatial
from .solver import PinSpec, SolverConfig, factorize


class UsageError(Exception):
    """User-facing input problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2; we want 1
        raise UsageError(message)


def _csv_floats(text: str, what: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",") if v.strip() != ""])
    except ValueError:
        raise UsageError(f"could not parse {what} {text!r} as comma-separated numbers") from None


def _load_targets(paths) -> TargetSet:
    files = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            found = sorted(p.glob("*.pgm"))
            if not found:
                raise UsageError(f"no .pgm files in directory {p}")
            files.extend(found)
        else:
            files.append(p)
    images = [netpbm.read_pgm(f) for f in files]
    try:
        return TargetSet(tuple(images))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _solver_cfg(args) -> SolverConfig:
    try:
        return SolverConfig(
            max_iterations=args.iters,
            rel_tolerance=args.tol,
            seed=args.seed,
            restarts=args.restarts,
            init_strategy=getattr(args, "init", "seeded-uniform"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_solver_flags(p):
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--iters", type=int, default=500, help="max solver iterations")
    p.add_argument("--tol", type=float, default=1e-6, help="relative objective tolerance")
    p.add_argument("--restarts", type=int, default=0, help="extra solver runs from derived seeds")


def _emit(doc: dict) -> None:
    print(json.dumps(doc))


def _cmd_factorize(args):
    targets = _load_targets(args.targets)
    cfg = _solver_cfg(args)
    pins = None
    if args.pin_normal_view:
        pins = PinSpec.column(args.frames, targets.k, 0, np.ones(args.frames))
    f = factorize(targets, args.frames, pins=pins, cfg=cfg)
    b = bundle_io.Bundle.from_factorization(
        f, metadata={"seed": args.seed, "iters": args.iters, "tol": args.tol}
    )
    bundle_io.write_bundle(b, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    _emit(
        {
            "finalObjective": f.objective_history[-1],
            "iterations": len(f.objective_history) - 1,
            "stopReason": f.stop_reason,
        }
    )


def _cmd_covert(args):
    secret = netpbm.read_pgm(args.secret)
    result = design_covert_noise(secret, seed=args.seed)
    b = bundle_io.Bundle.from_factorization(result.factorization, metadata={"seed": args.seed})
    bundle_io.write_bundle(b, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    _emit(
        {
            "leakage": result.leakage,
            "clampedPixels": result.feasibility_report,
            "perViewRmse": list(result.per_view_rmse),
        }
    )


def _cmd_dual(args):
    default = netpbm.read_pgm(args.default)
    shale = netpbm.read_pgm(args.shale)
    if (default.width, default.height) != (shale.width, shale.height):
        raise UsageError(
            f"default is {default.width}x{default.height}, "
            f"shale is {shale.width}x{shale.height}"
        )
    result = design_dual_view(default, shale, cfg=_solver_cfg(args), pin_shale=not args.free_shale)
    b = bundle_io.Bundle.from_factorization(result.factorization, metadata={"seed": args.seed})
    bundle_io.write_bundle(b, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    _emit(
        {
            "leakage": result.leakage,
            "clampedPixels": result.feasibility_report,
            "perViewRmse": list(result.per_view_rmse),
            "finalObjective": result.factorization.objective_history[-1],
        }
    )


def _cmd_perceive(args):
    b = bundle_io.read_bundle(args.bundle)
    chosen = [v is not None for v in (args.viewer, args.weights, args.mask_from)]
    if sum(chosen) != 1:
        raise UsageError("choose exactly one of --viewer, --weights, --mask-from")
    if args.viewer is not None:
        if not 0 <= args.viewer < b.k:
            raise UsageError(f"viewer index {args.viewer} out of range (K={b.k})")
        fused = perceive(b.frames, b.weights[:, args.viewer], b.fusion_mode)
    elif args.weights is not None:
        w = _csv_floats(args.weights, "--weights")
        if w.size != b.m:
            raise UsageError(f"--weights needs {b.m} values, got {w.size}")
        fused = perceive(b.frames, w, b.fusion_mode)
    else:
        other = bundle_io.read_bundle(args.mask_from)
        if other.mask is None:
            raise UsageError(f"{args.mask_from} carries no mask")
        if (other.mask.width, other.mask.height, other.mask.m) != (b.width, b.height, b.m):
            raise UsageError("mask dimensions do not match the bundle's frames")
        fused = perceive_spatial(b.frames, other.mask, b.fusion_mode)
    netpbm.write_pgm(fused.image, args.out, maxval=args.maxval)
    print(f"wrote {args.out}", file=sys.stderr)
    _emit({"overflow": fused.overflow, "clampedPixels": fused.clamped_count})


def _parse_geometry(args):
    if args.disk is not None:
        vals = _csv_floats(args.disk, "--disk")
        if vals.size != 3:
            raise UsageError("--disk needs cx,cy,radius")
        return masks_mod.Disk(vals[0], vals[1], vals[2])
    vals = _csv_floats(args.rect, "--rect")
    if vals.size != 4:
        raise UsageError("--rect needs x0,y0,x1,y1")
    return masks_mod.Rect(vals[0], vals[1], vals[2], vals[3])


def _cmd_mask(args):
    b = bundle_io.read_bundle(args.bundle)
    if args.kind == "region":
        inner = _csv_floats(args.inner, "--inner")
        outer = _csv_floats(args.outer, "--outer")
        if inner.size != b.m or outer.size != b.m:
            raise UsageError(f"--inner/--outer need {b.m} weights each")
        mask = masks_mod.make_region_mask(b.width, b.height, _parse_geometry(args), inner, outer)
    elif args.kind == "concentric":
        center = _csv_floats(args.center, "--center")
        if center.size != 2:
            raise UsageError("--center needs cx,cy")
        profile = _csv_floats(args.profile, "--profile")
        if profile.size != b.m:
            raise UsageError(f"--profile needs {b.m} radii")
        mask = masks_mod.make_concentric_mask(
            b.width, b.height, (center[0], center[1]), b.m, profile, mapping=args.mapping
        )
    else:  # alpha
        alphas = _csv_floats(args.alphas, "--alphas")
        if alphas.size != b.m:
            raise UsageError(f"--alphas needs {b.m} values")
        mask = masks_mod.alpha_blend_mask(b.width, b.height, b.m, alphas)
    bundle_io.write_bundle(b.with_mask(mask), args.out)
    print(f"wrote {args.out}", file=sys.stderr)


def _cmd_metrics(args):
    b = bundle_io.read_bundle(args.bundle)
    targets = _load_targets(args.targets)
    if (targets.width, targets.height) != (b.width, b.height) or targets.k != b.k:
        raise UsageError(
            f"bundle is {b.width}x{b.height} with K={b.k}, "
            f"targets are {targets.width}x{targets.height} with K={targets.k}"
        )
    fact = _bundle_factorization(b)
    report = metrics_mod.quality_report(targets, fact, b.fusion_mode)
    _emit(report.to_json_dict())


def _cmd_export_ui(args):
    b = bundle_io.read_bundle(args.bundle)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "bundle.json"
    bundle_io.export_ui_bundle(b, bundle_io.default_golden_weights(b), out_path)
    print(f"wrote {out_path}", file=sys.stderr)


def _bundle_factorization(b: bundle_io.Bundle) -> Factorization:
    return Factorization(atom_frames=b.frames, weight_matrix=b.weights)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tpvm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="solve targets into atom frames + weights")
    p.add_argument("--targets", nargs="+", required=True, help="PGM files or a directory")
    p.add_argument("--frames", type=int, required=True, help="number of atom frames M")
    p.add_argument("--out", required=True, help="output bundle path")
    p.add_argument(
        "--pin-normal-view",
        action="store_true",
        help="pin the first target's weight column to all-ones (unaided-eye view)",
    )
    p.add_argument(
        "--init",
        choices=["seeded-uniform", "replicate-targets"],
        default="seeded-uniform",
        help="solver initialization strategy",
    )
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_factorize)

    p = sub.add_parser("covert", help="hide a secret image behind a noise normal view")
    p.add_argument("--secret", required=True, help="secret PGM image")
    p.add_argument("--seed", type=int, default=0, help="noise RNG seed")
    p.add_argument("--out", required=True, help="output bundle path")
    p.set_defaults(func=_cmd_covert)

    p = sub.add_parser("dual", help="design a default view plus an alternate shale view")
    p.add_argument("--default", required=True, help="unaided-eye view PGM")
    p.add_argument("--shale", required=True, help="modulated view PGM")
    p.add_argument("--out", required=True, help="output bundle path")
    p.add_argument("--free-shale", action="store_true", help="let the solver pick shale weights")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_dual)

    p = sub.add_parser("perceive", help="simulate a fused view from a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--viewer", type=int, help="use weight column k from the bundle")
    p.add_argument("--weights", help="comma-separated weight vector")
    p.add_argument("--mask-from", help="bundle whose spatial mask to apply")
    p.add_argument("--out", required=True, help="output PGM path")
    p.add_argument("--maxval", type=int, default=255, choices=[255, 65535])
    p.set_defaults(func=_cmd_perceive)

    p = sub.add_parser("mask", help="attach a spatial modulation mask to a bundle")
    p.add_argument("kind", choices=["region", "concentric", "alpha"])
    p.add_argument("--bundle", required=True, help="input bundle")
    p.add_argument("--out", required=True, help="output bundle path")
    p.add_argument("--inner", help="region: inner weight vector (csv)")
    p.add_argument("--outer", help="region: outer weight vector (csv)")
    p.add_argument("--disk", help="region: cx,cy,radius")
    p.add_argument("--rect", help="region: x0,y0,x1,y1")
    p.add_argument("--center", help="concentric: cx,cy")
    p.add_argument("--profile", help="concentric: csv of ascending radii, one per frame")
    p.add_argument("--mapping", choices=["identity", "reversed"], default="identity")
    p.add_argument("--alphas", help="alpha: csv of per-frame blend weights")
    p.set_defaults(func=_cmd_mask)

    p = sub.add_parser("metrics", help="quality report for a bundle against targets")
    p.add_argument("--bundle", required=True)
    p.add_argument("--targets", nargs="+", required=True, help="PGM files or a directory")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("export-ui", help="write the JSON document for the browser explorer")
    p.add_argument("--bundle", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_export_ui)

    return parser


def _check_mask_flags(args):
    if args.command != "mask":
        return
    need = {
        "region": ["inner", "outer"],
        "concentric": ["center", "profile"],
        "alpha": ["alphas"],
    }[args.kind]
    missing = [f"--{name}" for name in need if getattr(args, name) is None]
    if missing:
        raise UsageError(f"mask {args.kind} requires {', '.join(missing)}")
    if args.kind == "region" and (args.disk is None) == (args.rect is None):
        raise UsageError("mask region requires exactly one of --disk or --rect")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _check_mask_flags(args)
        args.func(args)
        return 0
    except SystemExit as exc:  # --help and friends
        return 0 if exc.code in (None, 0) else int(exc.code)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except bundle_io.BundleInvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, netpbm.NetpbmError, bundle_io.BundleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
