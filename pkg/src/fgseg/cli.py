"""Command-line entry point: ``fgseg {build-bg,segment,bench-synth,evaluate}``."""

import argparse
import glob
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from fgseg.bgmodel import BackgroundModel, ModelConfig, build_background
from fgseg.diffmap import ShadowConfig, difference, save_difference
from fgseg.graphcut import SegParams, segment_graph, segment_graph_multiframe
from fgseg.imagecore import load_image, load_mask, rgb_to_hsv, save_mask
from fgseg.metrics import cc_error, write_scores_csv
from fgseg.morphology import segment_morph
from fgseg.synth import (METHODS, STANDARD_SNRS, PatternConfig, ordering_holds,
                         run_snr_sweep, write_sweep_csv)

log = logging.getLogger("fgseg")

IMAGE_EXTS = (".pgm", ".ppm", ".pnm", ".png")


class CLIError(Exception):
    pass


def list_images(spec):
    """Sorted image paths from a directory or a glob pattern."""
    if os.path.isdir(spec):
        paths = [os.path.join(spec, n) for n in os.listdir(spec)]
    else:
        paths = glob.glob(spec)
    paths = sorted(p for p in paths if p.lower().endswith(IMAGE_EXTS))
    if not paths:
        raise CLIError(f"no images found at {spec!r}")
    return paths


def stem(path):
    return os.path.splitext(os.path.basename(path))[0]


def load_frames(paths, shadow=False):
    frames = []
    for p in paths:
        img = load_image(p)
        if frames and img.shape != frames[0].shape:
            raise CLIError(f"frame size mismatch: {p} is {img.shape[:2]}x{img.shape[2]} but "
                           f"{paths[0]} is {frames[0].shape[:2]}x{frames[0].shape[2]}")
        frames.append(img)
    if shadow:
        if frames[0].shape[2] != 3:
            raise CLIError("--shadow needs colour frames")
        frames = [rgb_to_hsv(f) for f in frames]
    return frames


def _parse_percentiles(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI fractions, got {text!r}") from None
    return lo, hi


def _parse_floats(text):
    return [float(v) for v in text.split(",") if v]


def cmd_build_bg(args):
    lo, hi = args.percentiles
    cfg = ModelConfig(sample_stride=args.stride, lower_pct=lo, upper_pct=hi, std_floor=args.std_floor)
    paths = list_images(args.frames)
    model = build_background(load_frames(paths, args.shadow), cfg)
    model.save(args.out)
    means = model.mean.reshape(-1, model.shape[2]).mean(axis=0)
    print(f"model {model.shape[0]}x{model.shape[1]}x{model.shape[2]} from {len(paths)} frames -> {args.out}")
    print("channel means: " + " ".join(f"{m:.6f}" for m in means))
    return 0


def _segment_one(diff, args):
    if args.method == "threshold":
        return diff > args.tau
    if args.method == "morph":
        return segment_morph(diff, args.tau, args.radius)
    return segment_graph(diff, SegParams(args.tau, args.alpha))


def cmd_segment(args):
    if not os.path.exists(args.model):
        raise CLIError(f"model file not found: {args.model}")
    if args.method != "graph" and args.window != 1:
        raise CLIError("--window only applies to --method graph")
    model = BackgroundModel.load(args.model)
    paths = list_images(args.frames)
    frames = load_frames(paths, args.shadow)
    if frames[0].shape != model.shape:
        raise CLIError(f"frames are {frames[0].shape} but model {args.model} is {model.shape}")
    shadow = ShadowConfig(enabled=args.shadow, v_discount=args.v_discount)
    os.makedirs(args.out, exist_ok=True)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        diffs = list(pool.map(lambda f: difference(f, model, shadow), frames))
        if args.method == "graph" and args.window > 1:
            p = SegParams(args.tau, args.alpha)
            windows = [diffs[k:k + args.window] for k in range(0, len(diffs), args.window)]

            def solve(win):
                return list(segment_graph_multiframe(win, p)) if len(win) > 1 else [segment_graph(win[0], p)]

            masks = [m for ms in pool.map(solve, windows) for m in ms]
        else:
            masks = list(pool.map(lambda d: _segment_one(d, args), diffs))

    for path, mask, diff in zip(paths, masks, diffs):
        save_mask(mask, os.path.join(args.out, stem(path) + ".pgm"))
        if args.dump_diff:
            save_difference(diff, os.path.join(args.out, stem(path) + ".diff.pgm"), args.tau)

    if args.gt:
        gt_paths = {stem(p): p for p in list_images(args.gt)}
        rows = []
        for k, (path, mask) in enumerate(zip(paths, masks)):
            gt_path = gt_paths.get(stem(path))
            if gt_path is None:
                continue
            rows.append((k, args.method, cc_error(mask, load_mask(gt_path), args.connectivity)))
        with open(os.path.join(args.out, "scores.csv"), "w", newline="") as fh:
            write_scores_csv(fh, rows)
    print(f"{len(masks)} masks -> {args.out}")
    return 0


def cmd_bench_synth(args):
    pattern = PatternConfig(height=args.height, n_sections=args.sections, periods=args.periods)
    grids = {}
    if args.graph_alphas:
        grids["graph"] = {"alpha": tuple(args.graph_alphas)}
    rows = run_snr_sweep(snrs=args.snrs, methods=args.methods, grids=grids, trials=args.trials,
                         seed=args.seed, pattern=pattern)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_sweep_csv(fh, rows)
    else:
        write_sweep_csv(sys.stdout, rows)
    ok = ordering_holds(rows)
    log.info("ordering graph <= morph <= control %s", "holds" if ok else "VIOLATED")
    return 0 if ok else 1


def cmd_evaluate(args):
    a_paths = {stem(p): p for p in list_images(args.a)}
    b_paths = {stem(p): p for p in list_images(args.b)}
    gt_paths = {stem(p): p for p in list_images(args.gt)}
    if set(a_paths) != set(b_paths) or not set(a_paths) <= set(gt_paths):
        missing = sorted((set(a_paths) ^ set(b_paths)) | (set(a_paths) - set(gt_paths)))
        raise CLIError(f"misaligned frame sets; unmatched names: {', '.join(missing[:10])}")
    rows = []
    for label, paths in (("A", a_paths), ("B", b_paths)):
        for k, name in enumerate(sorted(paths)):
            gt = load_mask(gt_paths[name])
            rows.append((k, label, cc_error(load_mask(paths[name]), gt, args.connectivity)))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_scores_csv(fh, rows)
    else:
        write_scores_csv(sys.stdout, rows)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="fgseg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-bg", help="build a static background model from frames")
    p.add_argument("frames", help="frame directory or glob")
    p.add_argument("-o", "--out", required=True, help="model file to write")
    p.add_argument("--stride", type=int, default=4)
    p.add_argument("--percentiles", type=_parse_percentiles, default=(0.25, 0.75), metavar="LO,HI")
    p.add_argument("--std-floor", type=float, default=1.0 / 255.0)
    p.add_argument("--shadow", action="store_true", help="model frames in HSV")
    p.set_defaults(func=cmd_build_bg)

    p = sub.add_parser("segment", help="segment frames against a background model")
    p.add_argument("frames", help="frame directory or glob")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-o", "--out", required=True, help="output directory for masks")
    p.add_argument("--method", choices=("graph", "morph", "threshold"), default="graph")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--window", type=int, default=1, help="frames per multiframe graph")
    p.add_argument("--shadow", action="store_true", help="HSV comparison with V-darkening discount")
    p.add_argument("--v-discount", type=float, default=0.05)
    p.add_argument("--gt", help="ground-truth mask directory; writes scores.csv")
    p.add_argument("--connectivity", type=int, choices=(4, 8), default=8)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump-diff", action="store_true", help="also write scaled difference maps")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("bench-synth", help="synthetic SNR sweep; exit 1 if the method ordering fails")
    p.add_argument("--snrs", type=_parse_floats, default=list(STANDARD_SNRS))
    p.add_argument("--methods", type=lambda s: s.split(","), default=list(METHODS))
    p.add_argument("--graph-alphas", type=_parse_floats, default=None)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--height", type=int, default=PatternConfig.height)
    p.add_argument("--sections", type=int, default=PatternConfig.n_sections)
    p.add_argument("--periods", type=int, default=PatternConfig.periods)
    p.add_argument("-o", "--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench_synth)

    p = sub.add_parser("evaluate", help="compare two mask sets against ground truth")
    p.add_argument("a", help="mask directory for method A")
    p.add_argument("b", help="mask directory for method B")
    p.add_argument("--gt", required=True)
    p.add_argument("--connectivity", type=int, choices=(4, 8), default=8)
    p.add_argument("-o", "--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CLIError, ValueError, OSError) as exc:
        print(f"fgseg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
