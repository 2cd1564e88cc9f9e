"""Command-line front end.

Three subcommands over JSON documents:

    tribekit analyze   --input bounds.json
    tribekit construct --input bounds.json [--mu 0.25] [--verify exact]
    tribekit verify    --input report.json

Exit codes: 0 success with the feasibility guarantee, 1 construction
succeeded without the guarantee, 2 construction infeasible or the target
unachievable, 3 input error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .analysis import summarize
from .boolfn import DEFAULT_CAP, CapacityExceeded
from .construction import ConstructionInfeasible, MuNotAchievable, construct
from .reportio import (
    DocumentError,
    build_output_document,
    emit_json,
    load_json,
    parse_input_document,
    reconstruct_report,
)
from .verify import (
    DEFAULT_Z_THRESHOLD,
    VerificationFailure,
    verify_exact,
    verify_sampled,
)

EXIT_OK = 0
EXIT_UNGUARANTEED = 1
EXIT_INFEASIBLE = 2
EXIT_INPUT_ERROR = 3
EXIT_VERIFICATION_FAILURE = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Flag mistakes are input errors (exit 3), not argparse's default 2,
    # which is reserved for infeasible constructions.
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="tribekit",
        description="Build tribes-type Boolean functions under per-variable "
        "influence budgets and certify them with exact arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="feasibility numbers for a budget file")
    pa.add_argument("--input", required=True, help="JSON file with a bounds array")
    pa.add_argument("--output", default=None, help="write here instead of stdout")
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("construct", help="build the function and report on it")
    pc.add_argument("--input", required=True, help="JSON file with bounds (and mu)")
    pc.add_argument("--output", default=None, help="write here instead of stdout")
    pc.add_argument("--mu", default=None, help="expectation target; overrides the document")
    pc.add_argument(
        "--verify",
        choices=("exact", "sample", "none"),
        default=None,
        help="verification mode (default: exact when the table fits the cap, else sample)",
    )
    pc.add_argument("--cap", type=int, default=DEFAULT_CAP, help="truth-table variable cap")
    pc.add_argument("--samples", type=int, default=10**6, help="sample count for sampled mode")
    pc.add_argument("--seed", type=int, default=42, help="sampler seed")
    pc.add_argument("--z-threshold", type=float, default=DEFAULT_Z_THRESHOLD)
    pc.set_defaults(func=cmd_construct)

    pv = sub.add_parser("verify", help="re-certify a construction document")
    pv.add_argument("--input", required=True, help="report written by construct")
    pv.add_argument("--output", default=None, help="write here instead of stdout")
    pv.add_argument("--cap", type=int, default=DEFAULT_CAP, help="truth-table variable cap")
    pv.add_argument("--samples", type=int, default=10**6, help="sample count for sampled mode")
    pv.add_argument("--seed", type=int, default=42, help="sampler seed")
    pv.add_argument("--z-threshold", type=float, default=DEFAULT_Z_THRESHOLD)
    pv.set_defaults(func=cmd_verify)

    return parser


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_analyze(args: argparse.Namespace) -> int:
    bounds, _ = parse_input_document(load_json(args.input))
    summary = summarize(bounds)
    doc = {
        "talagrand_sum": summary.talagrand_sum,
        "alpha": summary.alpha,
        "mu_max": summary.mu_max,
        "feasible": summary.feasible,
    }
    _write(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    bounds, mu_doc = parse_input_document(load_json(args.input))
    mu_source = args.mu if args.mu is not None else mu_doc
    if mu_source is None:
        raise DocumentError("no mu given (use --mu or a mu field in the document)")
    report = construct(bounds, mu_source)

    mode = args.verify
    if mode is None:
        mode = "exact" if report.tribes.relevant_count <= args.cap else "sample"
    verification = None
    if mode == "exact":
        if report.tribes.relevant_count > args.cap:
            raise DocumentError(
                f"exact verification needs {report.tribes.relevant_count} "
                f"variables but the cap is {args.cap}; raise --cap or use "
                "--verify sample"
            )
        verification = verify_exact(report.tribes, report, cap=args.cap)
    elif mode == "sample":
        verification = verify_sampled(
            report.tribes, report, args.samples, args.seed, args.z_threshold
        )

    _write(emit_json(build_output_document(report, verification)), args.output)
    if verification is not None and not verification.passed:
        return EXIT_VERIFICATION_FAILURE
    if not report.all_checks_pass:
        return EXIT_VERIFICATION_FAILURE
    return EXIT_OK if report.guaranteed else EXIT_UNGUARANTEED


def cmd_verify(args: argparse.Namespace) -> int:
    report = reconstruct_report(load_json(args.input))
    if report.tribes.relevant_count <= args.cap:
        verification = verify_exact(report.tribes, report, cap=args.cap)
    else:
        verification = verify_sampled(
            report.tribes, report, args.samples, args.seed, args.z_threshold
        )
    _write(emit_json(build_output_document(report, verification)), args.output)
    return EXIT_OK if verification.passed else EXIT_VERIFICATION_FAILURE


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        return args.func(args)
    except (MuNotAchievable, ConstructionInfeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILURE
    except (DocumentError, CapacityExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
