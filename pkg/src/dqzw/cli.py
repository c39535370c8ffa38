"""Command-line front end: ``zwm generate | verify | attack | experiment``.

Exit codes: 0 success or authentic, 1 not authentic, 2 usage error,
3 processing error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from PIL import UnidentifiedImageError

from . import synthetic
from .arnold import CLASSIC
from .attacks import AttackSpec, apply_attack, default_suite, load_suite
from .errors import DQZWError
from .formats import read_key, read_zw, write_key, write_zw
from .imaging import FeatureParams, load_image, save_image
from .pipeline import GenerateConfig, generate, normalize_method, recover_watermark, reference_for, run_experiment, summarize, write_report
from .metrics import score

log = logging.getLogger("dqzw")

EXIT_OK, EXIT_NOT_AUTHENTIC, EXIT_USAGE, EXIT_PROCESSING = 0, 1, 2, 3

IMAGE_SUFFIXES = {".png", ".bmp", ".tif", ".tiff", ".jpg", ".jpeg", ".ppm", ".pgm"}

ATTACK_TYPES = {
    "gaussian": "gaussian_noise",
    "jpeg": "jpeg_compress",
    "rotate": "rotate",
    "crop": "center_crop",
    "brighten": "brighten",
    "pixel": "pixel_edit",
}


class UsageError(Exception):
    pass


def _matrix(text: str) -> tuple[int, int, int, int]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected four integers a,b,c,d, got {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"expected four integers a,b,c,d, got {text!r}")
    return vals


def _methods(text: str) -> list[str]:
    try:
        return [normalize_method(m.strip()) for m in text.split(",") if m.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zwm", description="Dual-quaternion fragile zero-watermarking for colour images.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="derive a zero-watermark and key from a carrier")
    g.add_argument("--method", choices=["lu", "qr", "svd"], required=True)
    g.add_argument("--carrier", type=Path, required=True)
    g.add_argument("--watermark", type=Path, required=True)
    g.add_argument("--zw-out", type=Path, required=True)
    g.add_argument("--key-out", type=Path, required=True)
    g.add_argument("--arnold-k", type=int, default=10, help="scrambling iterations (default 10)")
    g.add_argument("--arnold-matrix", type=_matrix, default=CLASSIC, help="unimodular map a,b,c,d (default 1,1,1,2)")
    g.add_argument("--size", type=int, default=None, help="resize the carrier to SIZE x SIZE first")
    g.add_argument("--feature", choices=["log_magnitude", "magnitude"], default="log_magnitude")

    v = sub.add_parser("verify", help="recover the watermark from a suspect image and score it")
    v.add_argument("--method", choices=["lu", "qr", "svd"], default=None, help="must match the zero-watermark if given")
    v.add_argument("--suspect", type=Path, required=True)
    v.add_argument("--zw", type=Path, required=True)
    v.add_argument("--key", type=Path, required=True)
    v.add_argument("--watermark-ref", type=Path, required=True)
    v.add_argument("--report", type=Path, default=None, help="write the metrics as JSON")
    v.add_argument("--recovered-out", type=Path, default=None, help="save the recovered watermark as PNG")
    v.add_argument("--ber-threshold", type=float, default=0.0, help="authentic iff BER <= this (default 0)")

    a = sub.add_parser("attack", help="apply one attack to an image")
    a.add_argument("--type", choices=sorted(ATTACK_TYPES), required=True)
    a.add_argument("--in", dest="inp", type=Path, required=True)
    a.add_argument("--out", type=Path, required=True)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--mean", type=float, help="gaussian: noise mean on the [0,1] scale")
    a.add_argument("--variance", type=float, help="gaussian: noise variance on the [0,1] scale")
    a.add_argument("--quality", type=int, help="jpeg: quality 1..100")
    a.add_argument("--angle", type=float, help="rotate: degrees counterclockwise")
    a.add_argument("--fraction", type=float, help="crop: zeroed fraction of the area")
    a.add_argument("--delta", type=int, help="brighten/pixel: integer offset")
    a.add_argument("--x", type=int, help="pixel: row")
    a.add_argument("--y", type=int, help="pixel: column")
    a.add_argument("--channel", type=int, help="pixel: channel 0..2")
    a.add_argument("--value", type=int, help="pixel: set this value instead of adding delta")

    e = sub.add_parser("experiment", help="run methods x attacks over a directory of carriers")
    e.add_argument("--corpus", type=Path, required=True)
    e.add_argument("--suite", type=Path, default=None, help="JSON attack suite (default: the six standard attacks)")
    e.add_argument("--methods", type=_methods, default=["DQLU", "DQQR", "DQSVD"])
    e.add_argument("--out", type=Path, required=True)
    e.add_argument("--watermark", type=Path, default=None, help="watermark image (default: a synthetic mark)")
    e.add_argument("--size", type=int, default=None)
    e.add_argument("--seed", type=int, default=0, help="seed for the default suite")
    e.add_argument("--workers", type=int, default=1)
    return p


_ATTACK_FLAGS = {
    "gaussian_noise": ("mean", "variance"),
    "jpeg_compress": ("quality",),
    "rotate": ("angle",),
    "center_crop": ("fraction",),
    "brighten": ("delta",),
    "pixel_edit": ("x", "y", "channel", "delta", "value"),
}
_ALL_FLAGS = {"mean", "variance", "quality", "angle", "fraction", "delta", "x", "y", "channel", "value"}


def attack_spec_from_args(args) -> AttackSpec:
    kind = ATTACK_TYPES[args.type]
    allowed = set(_ATTACK_FLAGS[kind])
    stray = sorted(f for f in _ALL_FLAGS - allowed if getattr(args, f) is not None)
    if stray:
        raise UsageError(f"--type {args.type} does not take " + ", ".join(f"--{f}" for f in stray))
    params = {f: getattr(args, f) for f in _ATTACK_FLAGS[kind] if getattr(args, f) is not None}
    return AttackSpec(kind, params, seed=args.seed)


def cmd_generate(args) -> int:
    config = GenerateConfig(
        arnold_k=args.arnold_k,
        arnold_matrix=args.arnold_matrix,
        size=args.size,
        feature=FeatureParams(transform=args.feature),
    )
    zw, key = generate(load_image(args.carrier), load_image(args.watermark), args.method, config)
    write_zw(zw, args.zw_out)
    write_key(key, args.key_out)
    print(f"{zw.method} zero-watermark {zw.m}x{zw.n} -> {args.zw_out}, key -> {args.key_out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    zw = read_zw(args.zw)
    key = read_key(args.key)
    if args.method is not None and normalize_method(args.method) != zw.method:
        raise UsageError(f"--method {args.method} does not match the {zw.method} zero-watermark")
    rec = recover_watermark(load_image(args.suspect), zw, key)
    rep = score(reference_for(load_image(args.watermark_ref), key), rec.watermark, args.ber_threshold)
    if args.recovered_out is not None:
        save_image(rec.watermark, args.recovered_out)
    out = rep.to_dict()
    out.update({"method": zw.method, "attack": None, "suspect": str(args.suspect)})
    if args.report is not None:
        args.report.write_text(json.dumps(out, indent=2))
    print(json.dumps(out))
    return EXIT_OK if rep.authentic else EXIT_NOT_AUTHENTIC


def cmd_attack(args) -> int:
    spec = attack_spec_from_args(args)
    save_image(apply_attack(load_image(args.inp), spec), args.out)
    print(f"{spec.kind} {spec.resolved} -> {args.out}")
    return EXIT_OK


def _corpus(path: Path) -> list[tuple[str, object]]:
    if not path.is_dir():
        raise UsageError(f"corpus {path} is not a directory")
    files = sorted(f for f in path.iterdir() if f.suffix.lower() in IMAGE_SUFFIXES)
    if not files:
        raise UsageError(f"no images found in {path}")
    return [(f.name, load_image(f)) for f in files]


def cmd_experiment(args) -> int:
    corpus = _corpus(args.corpus)
    suite = load_suite(args.suite) if args.suite is not None else default_suite(args.seed)
    if args.watermark is not None:
        wm = load_image(args.watermark)
    else:
        wm = synthetic.watermark(args.size or corpus[0][1].shape[0])
    rows = run_experiment(corpus, wm, suite, args.methods, GenerateConfig(size=args.size), workers=args.workers)
    csv_path, json_path = write_report(rows, args.out)
    print(summarize(rows))
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "attack": cmd_attack, "experiment": cmd_experiment}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"zwm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DQZWError, OSError, UnidentifiedImageError, json.JSONDecodeError) as exc:
        print(f"zwm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PROCESSING


if __name__ == "__main__":
    sys.exit(main())
