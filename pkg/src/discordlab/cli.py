"""Command-line entry point: ``discordlab {sweep,certify,classify,kinks,audit}``.

Exit status is 0 on success, 1 when an invariant is violated or an audit
fails, and 2 for usage errors (bad flags, parameters outside their domain).
"""

from __future__ import annotations

import argparse
import json
import sys

from .discord import BoundViolation, OptimizerConfig, certify
from .entanglement import classify
from .errors import DiscordLabError, IoError
from .states import horodecki_state
from .sweep import audit_random, bound_sweep, detect_kinks, emit_output, run_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _optimizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-8, help="exactness tolerance on the gap")


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, seed=args.seed, exactness_tol=args.tol)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discordlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="certify and classify the 3x3 family on an alpha grid")
    p.add_argument("--min", dest="alpha_min", type=float, required=True)
    p.add_argument("--max", dest="alpha_max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    _optimizer_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("certify", help="print a certification report for one alpha")
    p.add_argument("--alpha", type=float, required=True)
    _optimizer_flags(p)

    p = sub.add_parser("classify", help="entanglement phase of one alpha")
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("kinks", help="locate sudden changes of the sharp bound")
    p.add_argument("--min", dest="alpha_min", type=float, required=True)
    p.add_argument("--max", dest="alpha_max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--refine", type=float, default=1e-6)

    p = sub.add_parser("audit", help="randomized bound-ordering audit")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    return parser


def _print_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=1)
    sys.stdout.write("\n")


def run(args) -> int:
    if args.command == "sweep":
        records = run_sweep(args.alpha_min, args.alpha_max, args.steps, _config(args))
        emit_output(records, args.format, args.out)
        return EXIT_OK
    if args.command == "certify":
        report = certify(horodecki_state(args.alpha).state, _config(args))
        _print_json({"alpha": args.alpha, **report.to_dict()})
        return EXIT_OK
    if args.command == "classify":
        label = classify(horodecki_state(args.alpha).state)
        _print_json({"alpha": args.alpha, "phase": label.phase.value, "negativity": label.negativity, "ccnr": label.ccnr})
        return EXIT_OK
    if args.command == "kinks":
        report = detect_kinks(bound_sweep(args.alpha_min, args.alpha_max, args.steps), args.refine)
        _print_json(report.to_dict())
        return EXIT_OK
    if args.command == "audit":
        summary = audit_random(args.count, args.seed)
        _print_json(summary.to_dict())
        return EXIT_OK if summary.passed else EXIT_FAIL
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (BoundViolation, IoError) as exc:
        print(f"discordlab: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except DiscordLabError as exc:
        print(f"discordlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
