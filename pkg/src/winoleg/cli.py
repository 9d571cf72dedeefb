"""Command-line interface.

Subcommands: gen-matrices, conv, bench-error, cond.  Exit codes: 0 success,
1 runtime/numeric failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .construct import InterpolationPoints, build_plan, plan_to_float
from .errors import DimensionError, InvalidPointsError
from .harness import (ExperimentConfig, condition_table, load_tensor,
                      run_error_benchmark, save_tensor)
from .pipeline import conv2d_winograd
from .quantize import QuantConfig, conv2d_winograd_quantized
from .reference import conv2d_direct

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="winoleg",
        description="Winograd/Toom-Cook convolution transforms, quantized "
                    "pipelines and numerical-error benchmarks.")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the experiment seed")
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON on stdout")
    parser.add_argument("--output", default=None,
                        help="output path (tensor file or report base name)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-matrices", help="print transform matrices")
    _add_plan_args(gen)
    gen.add_argument("--base", choices=("canonical", "legendre"), default="canonical")
    gen.add_argument("--format", choices=("exact", "float"), default="exact")
    gen.set_defaults(func=cmd_gen_matrices)

    conv = sub.add_parser("conv", help="convolve stored tensors")
    _add_plan_args(conv)
    conv.add_argument("--input", required=True, help="input tensor JSON [c_in, H, W]")
    conv.add_argument("--weights", required=True,
                      help="weight tensor JSON [c_out, c_in, k, k]")
    conv.add_argument("--mode", choices=("canonical", "legendre"), default="canonical")
    conv.add_argument("--qconfig", default="float",
                      help='"float" or a width name such as "8b" or "8b+9b"')
    conv.set_defaults(func=cmd_conv)

    bench = sub.add_parser("bench-error", help="Monte-Carlo error benchmark")
    bench.add_argument("--config", default=None, help="experiment config JSON file")
    bench.add_argument("--o", type=int, default=None)
    bench.add_argument("--k", type=int, default=None)
    bench.add_argument("--points", default=None)
    bench.add_argument("--modes", default=None, help="comma list, e.g. canonical,legendre")
    bench.add_argument("--qconfigs", default=None, help="comma list, e.g. 8b,8b+9b")
    bench.add_argument("--trials", type=int, default=None)
    bench.add_argument("--distribution", default=None,
                       help="standard-normal or uniform(-1,1)")
    bench.add_argument("--channels", default=None, help="c_in,c_out")
    bench.add_argument("--spatial", default=None, help="H,W")
    bench.add_argument("--workers", type=int, default=1,
                       help="parallel trial workers (same report as serial)")
    bench.set_defaults(func=cmd_bench_error)

    cond = sub.add_parser("cond", help="condition numbers of the transform factors")
    _add_plan_args(cond)
    cond.set_defaults(func=cmd_cond)
    return parser


def _add_plan_args(parser) -> None:
    parser.add_argument("--o", type=int, default=4, help="output tile edge")
    parser.add_argument("--k", type=int, default=3, help="kernel edge")
    parser.add_argument("--points", default=None,
                        help='interpolation points, e.g. "0,1,-1,2,-2,inf"')


def _plan_from_args(args, use_legendre: bool):
    points = None if args.points is None else InterpolationPoints.parse(args.points)
    return build_plan(args.o, args.k, points, use_legendre=use_legendre)


def _format_entry(value, exact: bool) -> str:
    return str(value) if exact else f"{float(value):.12g}"


def _matrix_block(name: str, matrix: np.ndarray, exact: bool) -> str:
    cells = [[_format_entry(v, exact) for v in row] for row in matrix]
    widths = [max(len(cells[i][j]) for i in range(len(cells)))
              for j in range(len(cells[0]))]
    lines = [f"{name} ({len(cells)}x{len(cells[0])}):"]
    for row in cells:
        lines.append("  " + "  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)


def cmd_gen_matrices(args) -> int:
    plan = _plan_from_args(args, use_legendre=(args.base == "legendre"))
    exact = args.format == "exact"
    shown = plan if exact else plan_to_float(plan)
    mats = [("G", shown.G), ("B^T", shown.B.T), ("A^T", shown.A.T)]
    if args.base == "legendre":
        bc = shown.base_change
        mats += [("P^T", bc.P.T), ("P^-T", bc.P_inv.T),
                 ("G_P", shown.G_P), ("B_P^T", shown.B_P.T), ("A_P^T", shown.A_P.T)]
    if args.json:
        doc = {"o": plan.o, "k": plan.k, "points": str(plan.points),
               "base": args.base, "format": args.format,
               "matrices": {name: [[_format_entry(v, exact) if exact else float(v)
                                     for v in row] for row in mat]
                            for name, mat in mats}}
        print(json.dumps(doc, indent=2))
    else:
        print(f"F({plan.o},{plan.k})  points: {plan.points}")
        for name, mat in mats:
            print(_matrix_block(name, mat, exact))
    return 0


def cmd_conv(args) -> int:
    x = load_tensor(args.input)
    w = load_tensor(args.weights)
    plan = _plan_from_args(args, use_legendre=(args.mode == "legendre"))
    if args.qconfig == "float":
        out = conv2d_winograd(x, w, plan, args.mode)
    else:
        qc = QuantConfig.from_name(args.qconfig)
        out, _ = conv2d_winograd_quantized(x, w, plan, args.mode, qc)
    ref = conv2d_direct(x, w)
    diff = float(np.linalg.norm((out - ref).ravel()))
    denom = float(np.linalg.norm(ref.ravel()))
    rel = diff / denom if denom > 0 else (0.0 if diff == 0.0 else float("inf"))
    out_path = args.output or "output.json"
    save_tensor(out_path, out)
    if args.json:
        print(json.dumps({"output": out_path, "rel_l2_vs_direct": rel}))
    else:
        print(f"wrote {out_path}  rel_l2_vs_direct={rel!r}")
    return 0


def cmd_bench_error(args) -> int:
    doc = {}
    if args.config is not None:
        with open(args.config) as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
    overrides = {
        "o": args.o, "k": args.k, "points": args.points, "trials": args.trials,
        "seed": args.seed, "input_distribution": args.distribution,
    }
    if args.modes is not None:
        overrides["modes"] = [m.strip() for m in args.modes.split(",") if m.strip()]
    if args.qconfigs is not None:
        overrides["qconfigs"] = [q.strip() for q in args.qconfigs.split(",") if q.strip()]
    if args.channels is not None:
        overrides["channels"] = [int(v) for v in args.channels.split(",")]
    if args.spatial is not None:
        overrides["spatial"] = [int(v) for v in args.spatial.split(",")]
    doc.update({k: v for k, v in overrides.items() if v is not None})
    config = ExperimentConfig.from_dict(doc)

    report = run_error_benchmark(config, workers=args.workers)
    base = args.output or "error_report"
    csv_path, json_path = report.write(base)
    if args.json:
        print(json.dumps(report.json_dict(), indent=2))
    else:
        print(f"wrote {csv_path} and {json_path}")
        for row in report.rows:
            if row["metric"] == "rel_l2_err":
                print(f"  {row['mode']:<10s} {row['qconfig']:<8s} "
                      f"rel_l2 mean={row['mean']:.6g} median={row['median']:.6g} "
                      f"max={row['max']:.6g}")
    return 0


def cmd_cond(args) -> int:
    plan = _plan_from_args(args, use_legendre=True)
    table = condition_table(plan)
    if args.json:
        print(json.dumps({"o": plan.o, "k": plan.k, "points": str(plan.points),
                          "condition_numbers": table}, indent=2))
    else:
        print(f"F({plan.o},{plan.k})  points: {plan.points}")
        print(f"{'matrix':<8s} {'two_norm':>14s} {'frobenius':>14s}")
        for row in table:
            print(f"{row['matrix']:<8s} {row['two_norm']:>14.6g} {row['frobenius']:>14.6g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidPointsError, DimensionError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"failure: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
