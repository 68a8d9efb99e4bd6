"""Command line front end.

Subcommands: synth (demo dataset), convert (Fourier <-> Fresnel), reconstruct
(field to 8-bit amplitude view), denoise (adaptive Wiener on a PGM view),
score (single-pair metric run) and bench (full track evaluation against MOS).

Exit codes: 0 success, 1 runtime failure (bad data, degenerate inputs),
2 usage error (unknown subcommand, flag or metric id).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .denoise import AUTO, WienerParams, wiener_denoise
from .errors import HoloQAError, UnknownMetric
from .field import (
    ApertureSpec,
    dequantize_components,
    load_field,
    load_quantized,
    store_field,
)
from .harness import TrackConfig, emit_report, load_manifest, run_track
from .metrics import (
    ALL_METRIC_IDS,
    COMPLEX_METRICS,
    MAP_METRICS,
    evaluate_complex,
    evaluate_real,
)
from .stats import read_mos_csv
from .synth import generate_demo_dataset
from .transform import (
    ConversionPlan,
    clip_and_quantize_view,
    fourier_to_fresnel,
    fresnel_to_fourier,
    load_gray_pgm,
    reconstruct_view,
    store_gray_pgm,
    store_view,
)


def _parse_metrics(value: str) -> tuple:
    ids = tuple(m.strip() for m in value.split(",") if m.strip())
    for mid in ids:
        if mid not in ALL_METRIC_IDS:
            raise UnknownMetric(
                f"unknown metric {mid!r}; known: {', '.join(ALL_METRIC_IDS)}"
            )
    return ids


def _load_any_field(base: str):
    """Load a field base as float32 or quantized, whichever the sidecar says."""
    with open(base + ".meta.json", "r", encoding="utf-8") as fh:
        dtype = json.load(fh).get("dtype")
    if dtype == "u8":
        return dequantize_components(load_quantized(base))
    return load_field(base)


def _aperture_from_args(args, rows: int, cols: int) -> ApertureSpec | None:
    if args.aperture is None:
        return None
    h, w = args.aperture
    if args.view == "corner":
        return ApertureSpec.right_corner(rows, cols, h, w)
    return ApertureSpec.center(rows, cols, h, w)


def _wiener_from_args(args) -> WienerParams:
    nv = args.wiener_noise
    if nv != AUTO:
        nv = float(nv)
    return WienerParams(args.wiener_window, args.wiener_window, nv)


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_synth(args) -> int:
    path = generate_demo_dataset(
        args.out, size=args.size, aperture=args.aperture, seed=args.seed,
    )
    print(path)
    return 0


def _cmd_convert(args) -> int:
    field = _load_any_field(args.input)
    if args.inverse:
        with open(args.plan, "r", encoding="utf-8") as fh:
            plan = ConversionPlan(**json.load(fh))
        out = fresnel_to_fourier(field, plan)
        store_field(out, args.out)
    else:
        out, plan = fourier_to_fresnel(field, args.upsample_m)
        store_field(out, args.out)
        with open(args.out + ".plan.json", "w", encoding="utf-8") as fh:
            json.dump(plan.__dict__, fh, indent=1, sort_keys=True)
    print(args.out)
    return 0


def _cmd_reconstruct(args) -> int:
    field = _load_any_field(args.input)
    ap = _aperture_from_args(args, field.rows, field.cols)
    amp = reconstruct_view(field, ap, args.focal_offset)
    view, _ = clip_and_quantize_view(
        amp, amp, args.clip_percentile, ap, args.focal_offset,
        os.path.basename(args.input),
    )
    store_view(view, args.out)
    print(args.out)
    return 0


def _cmd_denoise(args) -> int:
    pixels = load_gray_pgm(args.input).astype(np.float64)
    out = wiener_denoise(pixels, _wiener_from_args(args))
    store_gray_pgm(np.clip(np.round(out), 0, 255).astype(np.uint8), args.out)
    print(args.out)
    return 0


def _cmd_score(args) -> int:
    metric_ids = _parse_metrics(args.metrics)
    field_mode = os.path.exists(args.ref + ".meta.json")
    if field_mode:
        ref = _load_any_field(args.ref).data
        dist = _load_any_field(args.dist).data
    else:
        ref = load_gray_pgm(args.ref).astype(np.float64)
        dist = load_gray_pgm(args.dist).astype(np.float64)
    for mid in metric_ids:
        if mid in COMPLEX_METRICS:
            if not field_mode:
                raise UnknownMetric(f"{mid!r} needs complex field inputs, not views")
            score = evaluate_complex(mid, ref, dist)
        elif field_mode:
            score = evaluate_real(mid, np.abs(ref), np.abs(dist))
        else:
            score = evaluate_real(mid, ref, dist)
        print(f"{mid}\t{score.value!r}")
        if args.emit_maps and mid in MAP_METRICS and not field_mode:
            qmap = MAP_METRICS[mid](ref, dist)
            lo, hi = float(qmap.min()), float(qmap.max())
            span = (hi - lo) or 1.0
            codes = np.round(255.0 * (qmap - lo) / span).astype(np.uint8)
            os.makedirs(args.out, exist_ok=True)
            store_gray_pgm(codes, os.path.join(args.out, f"{mid}_map.pgm"))
    return 0


def _cmd_bench(args) -> int:
    manifest = load_manifest(args.manifest)
    mos = read_mos_csv(args.mos)
    config = TrackConfig(
        args.track,
        _parse_metrics(args.metrics) if args.metrics else (),
        args.upsample_m,
        args.clip_percentile,
        _wiener_from_args(args),
    )
    report = run_track(manifest, mos, config)
    for path in emit_report(report, args.out, config):
        print(path)
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holoqa",
        description="Holographic quality assessment pipeline",
    )
    parser.add_argument("--version", action="version", version=f"holoqa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate the self-contained demo dataset")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--size", type=int, default=256, help="hologram side length")
    p.add_argument("--aperture", type=int, default=192, help="aperture side length")
    p.add_argument("--seed", type=int, default=1234)
    p.set_defaults(run=_cmd_synth)

    p = sub.add_parser("convert", help="convert between Fourier and Fresnel form")
    p.add_argument("--in", dest="input", required=True, help="input field base path")
    p.add_argument("--out", required=True, help="output field base path")
    p.add_argument("--upsample-m", type=int, default=2)
    p.add_argument("--inverse", action="store_true",
                   help="apply the inverse conversion using --plan")
    p.add_argument("--plan", help="conversion plan JSON (required with --inverse)")
    p.set_defaults(run=_cmd_convert)

    p = sub.add_parser("reconstruct", help="render an 8-bit amplitude view")
    p.add_argument("--in", dest="input", required=True, help="input field base path")
    p.add_argument("--out", required=True, help="output PGM path")
    p.add_argument("--view", choices=("center", "corner"), default="center")
    p.add_argument("--aperture", type=int, nargs=2, metavar=("H", "W"),
                   help="aperture window size (full field when omitted)")
    p.add_argument("--focal-offset", type=float, default=0.0)
    p.add_argument("--clip-percentile", type=float, default=99.9)
    p.set_defaults(run=_cmd_reconstruct)

    p = sub.add_parser("denoise", help="adaptive Wiener despeckling of a view")
    p.add_argument("--in", dest="input", required=True, help="input PGM path")
    p.add_argument("--out", required=True, help="output PGM path")
    p.add_argument("--wiener-window", type=int, default=5)
    p.add_argument("--wiener-noise", default=AUTO,
                   help="noise variance, or 'auto' (default)")
    p.set_defaults(run=_cmd_denoise)

    p = sub.add_parser("score", help="score a reference/distorted pair")
    p.add_argument("--ref", required=True, help="reference view PGM or field base")
    p.add_argument("--dist", required=True, help="distorted view PGM or field base")
    p.add_argument("--metrics", required=True,
                   help="comma-separated metric ids")
    p.add_argument("--emit-maps", action="store_true",
                   help="write per-pixel quality maps where available")
    p.add_argument("--out", default=".", help="directory for emitted maps")
    p.set_defaults(run=_cmd_score)

    p = sub.add_parser("bench", help="run a full evaluation track")
    p.add_argument("--manifest", required=True, help="dataset manifest JSON")
    p.add_argument("--mos", required=True, help="MOS CSV file")
    p.add_argument("--track", required=True, choices=("qa1", "qa2", "qa3", "qa4"))
    p.add_argument("--metrics", help="comma-separated metric ids (default: all valid)")
    p.add_argument("--out", required=True, help="report output directory")
    p.add_argument("--upsample-m", type=int, default=2)
    p.add_argument("--clip-percentile", type=float, default=99.9)
    p.add_argument("--wiener-window", type=int, default=5)
    p.add_argument("--wiener-noise", default=AUTO)
    p.set_defaults(run=_cmd_bench)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UnknownMetric as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HoloQAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
