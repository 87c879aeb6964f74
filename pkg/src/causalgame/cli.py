"""Command-line front end.

Exit codes: 0 on success, 1 on a domain failure (invalid process, bad
file contents, unwritable output), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .game import (
    joint_distribution,
    load_strategy_pair,
    strategy_pair_to_dict,
    success_probability,
)
from .optimize import QUANTUM_BOUND, OptimizerConfig, maximize_success
from .processes import (
    WernerParams,
    geometric_distance_werner,
    is_causally_separable_werner,
    load_process,
    make_causal_channel,
    make_noise,
    make_ocb,
    make_werner,
    save_process,
    validate_process,
)
from .scan import SCAN_HEADER, werner_scan


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _fail(message: str) -> int:
    print(json.dumps({"error": message}), file=sys.stderr)
    return 1


def _cmd_make(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.preset == "ocb":
        w = make_ocb()
    elif args.preset == "noise":
        w = make_noise()
    elif args.preset == "werner":
        if args.eta1 is None or args.eta2 is None:
            parser.error("--preset werner requires --eta1 and --eta2")
        w = make_werner(WernerParams(eta1=args.eta1, eta2=args.eta2))
    elif args.preset == "causal-a-to-b":
        w = make_causal_channel("a-to-b", +1)
    elif args.preset == "causal-b-to-a":
        w = make_causal_channel("b-to-a", +1)
    else:  # pragma: no cover - argparse choices guard this
        parser.error(f"unknown preset {args.preset}")
    try:
        save_process(w, args.out)
    except OSError as exc:
        return _fail(f"cannot write {args.out}: {exc}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        w = load_process(args.path)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"cannot load process: {exc}")
    report = validate_process(w)
    _emit(report.to_dict())
    return 0 if report.valid else 1


def _cmd_play(args: argparse.Namespace) -> int:
    try:
        w = load_process(args.w)
        pair = load_strategy_pair(args.strategy)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"cannot load inputs: {exc}")
    report = validate_process(w)
    if not report.valid:
        _emit(report.to_dict())
        return 1
    dist = joint_distribution(w, pair)
    records = [
        {
            "x": x,
            "y": y,
            "a": a,
            "b": b,
            "bprime": bp,
            "p": float(dist[x, y, a, b, bp]),
        }
        for x in range(2)
        for y in range(2)
        for a in range(2)
        for b in range(2)
        for bp in range(2)
    ]
    _emit(
        {
            "success_probability": success_probability(w, pair),
            "distribution": records,
        }
    )
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    try:
        w = load_process(args.w)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"cannot load process: {exc}")
    cfg = OptimizerConfig(
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        tol=args.tol,
        seed=args.seed,
    )
    try:
        result = maximize_success(w, cfg)
    except ValueError as exc:
        return _fail(str(exc))
    _emit(
        {
            "best_value": result.best_value,
            "branch": result.branch,
            "bound": float(QUANTUM_BOUND),
            "strategy": strategy_pair_to_dict(result.best_pair),
            "restart_trace": result.restart_trace,
        }
    )
    return 0


def _cmd_distance(args: argparse.Namespace) -> int:
    params = WernerParams(eta1=args.eta1, eta2=args.eta2)
    try:
        dist = geometric_distance_werner(params)
        separable = is_causally_separable_werner(params)
    except ValueError as exc:
        return _fail(str(exc))
    _emit(
        {
            "eta1": args.eta1,
            "eta2": args.eta2,
            "distance": dist,
            "separable": separable,
            "verdict": "separable" if separable else "non-separable",
        }
    )
    return 0


def _cmd_scan(args: argparse.Namespace) -> int:
    rows = werner_scan(args.grid)
    try:
        with open(args.out, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(SCAN_HEADER)
            for row in rows:
                writer.writerow(row.as_csv())
    except OSError as exc:
        return _fail(f"cannot write {args.out}: {exc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalgame",
        description="Process matrices, the bipartite causal game, and its bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_make = sub.add_parser("make", help="write a canonical process file")
    p_make.add_argument(
        "--preset",
        required=True,
        choices=["ocb", "noise", "werner", "causal-a-to-b", "causal-b-to-a"],
    )
    p_make.add_argument("--eta1", type=float)
    p_make.add_argument("--eta2", type=float)
    p_make.add_argument("--out", required=True)

    p_validate = sub.add_parser("validate", help="check a process file")
    p_validate.add_argument("path")

    p_play = sub.add_parser("play", help="play the game with a strategy file")
    p_play.add_argument("--w", required=True)
    p_play.add_argument("--strategy", required=True)

    p_opt = sub.add_parser("optimize", help="maximise the game score for a process")
    p_opt.add_argument("--w", required=True)
    p_opt.add_argument("--restarts", type=int, default=64)
    p_opt.add_argument("--seed", type=int, default=42)
    p_opt.add_argument("--max-iterations", type=int, default=2000)
    p_opt.add_argument("--tol", type=float, default=1e-10)

    p_scan = sub.add_parser("scan-werner", help="sweep the parameter plane to CSV")
    p_scan.add_argument("--grid", type=int, default=201)
    p_scan.add_argument("--out", required=True)

    p_dist = sub.add_parser("distance", help="distance to the causally separable region")
    p_dist.add_argument("--eta1", type=float, required=True)
    p_dist.add_argument("--eta2", type=float, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "make":
        return _cmd_make(args, parser)
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "play":
        return _cmd_play(args)
    if args.command == "optimize":
        return _cmd_optimize(args)
    if args.command == "distance":
        return _cmd_distance(args)
    if args.command == "scan-werner":
        if args.grid < 2:
            parser.error("--grid must be at least 2")
        return _cmd_scan(args)
    parser.error(f"unknown command {args.command}")  # pragma: no cover
    return 2  # pragma: no cover


if __name__ == "__main__":
    raise SystemExit(main())
