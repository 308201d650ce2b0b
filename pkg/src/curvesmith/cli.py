"""Command-line front end: preprocess, fit, apply, curve, fid.

Machine-readable results go to stdout; progress and warnings to stderr.
Config precedence per flag: CLI value > CURVESMITH_<NAME> env var > default.
Exit codes: 0 success, 1 domain error, 2 I/O or format error.
"""

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, color, curves, fid, gpr, pipeline, preprocess
from .errors import CurvesmithError, FormatError, InvalidInputError
from .imageio import read_image, write_image

log = logging.getLogger("curvesmith")


def _env_default(name, cast, fallback):
    raw = os.environ.get(f"CURVESMITH_{name}")
    if raw is None:
        return fallback
    return cast(raw)


def _add_jobs(parser):
    parser.add_argument("--jobs", type=int,
                        default=_env_default("JOBS", int, os.cpu_count() or 1),
                        help="parallel workers (default: logical CPUs)")


def _add_space(parser):
    parser.add_argument("--space", choices=color.SPACES,
                        default=_env_default("SPACE", str, "srgb"),
                        help="working color space")


def build_parser():
    parser = argparse.ArgumentParser(prog="curvesmith",
                                     description="Luminance-curve retouching baseline and FID evaluator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="resize a directory of images by long edge")
    p.add_argument("--input-dir", required=True, type=Path)
    p.add_argument("--output-dir", required=True, type=Path)
    p.add_argument("--long-edge", type=int,
                   default=_env_default("LONG_EDGE", int, 500))
    _add_space(p)
    _add_jobs(p)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("curve", help="print an image's 51-point sampled luminance CDF")
    p.add_argument("--image", required=True, type=Path)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    _add_space(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("fit", help="train the curve regressor on paired raw/target directories")
    p.add_argument("--raw-dir", required=True, type=Path)
    p.add_argument("--target-dir", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--alpha", type=float,
                   default=_env_default("ALPHA", float, gpr.DEFAULT_ALPHA))
    p.add_argument("--folds", type=int,
                   default=_env_default("FOLDS", int, gpr.DEFAULT_FOLDS))
    p.add_argument("--grid", type=float, nargs="+", default=list(gpr.DEFAULT_GRID))
    p.add_argument("--seed", type=int, default=_env_default("SEED", int, 0))
    _add_space(p)
    _add_jobs(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("apply", help="retouch one image with a trained model")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--output", required=True, type=Path)
    _add_space(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("fid", help="Frechet distance between two feature sets or image directories")
    p.add_argument("--features-a", type=Path)
    p.add_argument("--features-b", type=Path)
    p.add_argument("--images-a", type=Path)
    p.add_argument("--images-b", type=Path)
    p.add_argument("--extractor", choices=["tiny"], default="tiny")
    _add_jobs(p)
    p.set_defaults(func=cmd_fid)

    return parser


def cmd_preprocess(args):
    images = sorted(
        p for p in args.input_dir.iterdir()
        if p.is_file() and p.suffix.lower() in preprocess.IMAGE_EXTENSIONS
    )
    if not images:
        raise InvalidInputError(f"no images in {args.input_dir}")
    args.output_dir.mkdir(parents=True, exist_ok=True)

    def one(path):
        img = read_image(path)
        out = preprocess.resize_long_edge(img, args.long_edge)
        write_image(out, args.output_dir / (path.stem + ".png"))
        return path.name

    if args.jobs <= 1:
        done = [one(p) for p in images]
    else:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            done = list(pool.map(one, images))
    print(f"resized {len(done)} images to long edge {args.long_edge}", file=sys.stderr)
    return 0


def cmd_curve(args):
    values = pipeline.image_curve(read_image(args.image), args.space)
    if args.csv:
        for v in values:
            print(f"{v:.10g}")
    else:
        print(json.dumps([float(v) for v in values]))
    return 0


def cmd_fit(args):
    start = time.monotonic()
    pairs = preprocess.pair_dataset(args.raw_dir, args.target_dir)
    if len(pairs) < args.folds:
        raise InvalidInputError(f"need at least {args.folds} pairs for {args.folds}-fold CV, got {len(pairs)}")
    X, Y = pipeline.curves_for_pairs(pairs, args.space, args.jobs)
    kernel, rmse = gpr.cross_validate(X, Y, grid=args.grid, folds=args.folds,
                                      alpha=args.alpha, seed=args.seed)
    model = gpr.fit(X, Y, kernel, args.alpha, cv_seed=args.seed)
    gpr.save_model(model, args.out)
    print("length_scale\tcv_rmse")
    for ls in args.grid:
        marker = "\t*" if float(ls) == kernel.length_scale else ""
        print(f"{ls:g}\t{rmse[float(ls)]:.6g}{marker}")
    elapsed = time.monotonic() - start
    print(f"trained on {len(X)} pairs in {elapsed:.1f}s; selected length_scale="
          f"{kernel.length_scale:g}; model written to {args.out}", file=sys.stderr)
    return 0


def cmd_apply(args):
    model = gpr.load_model(args.model)
    img = read_image(args.input)
    out = pipeline.apply_model(model, img, args.space)
    write_image(out, args.output)
    return 0


def _features_for(args, feat_path, image_dir):
    if feat_path is not None:
        return fid.read_features(feat_path)
    images = sorted(
        p for p in image_dir.iterdir()
        if p.is_file() and p.suffix.lower() in preprocess.IMAGE_EXTENSIONS
    )
    if len(images) < 2:
        raise InvalidInputError(f"need at least 2 images in {image_dir}")

    def one(path):
        return fid.tiny_image_features(read_image(path))

    if args.jobs <= 1:
        rows = [one(p) for p in images]
    else:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(one, images))
    return fid.make_feature_set(np.array(rows), str(image_dir))


def cmd_fid(args):
    if (args.features_a is None) == (args.images_a is None):
        raise InvalidInputError("give exactly one of --features-a or --images-a (and same for b)")
    if (args.features_b is None) == (args.images_b is None):
        raise InvalidInputError("give exactly one of --features-b or --images-b")
    fs_a = _features_for(args, args.features_a, args.images_a)
    fs_b = _features_for(args, args.features_b, args.images_b)
    if fs_a.dim != fs_b.dim:
        raise InvalidInputError(f"feature dims differ: {fs_a.dim} vs {fs_b.dim}")
    d2 = fid.frechet_distance(fid.fit_gaussian(fs_a), fid.fit_gaussian(fs_b))
    print(f"{d2:.4f}")
    return 0


def main(argv=None):
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING,
                        format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CurvesmithError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
