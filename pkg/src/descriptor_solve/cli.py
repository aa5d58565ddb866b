"""Command-line front end.

Subcommands
-----------
``analyze <file>``
    Pencil classification: kind, dimension split, nilpotency index,
    eigenvalues.  Singular pencils are data, not errors.
``check <file>``
    Consistency verdict for the file's initial condition.
``solve <file>``
    Emit a trajectory; ``--auto`` (default) picks the unique solution when
    the initial condition is consistent and the least-squares optimal one
    otherwise.

Exit codes: 0 success, 2 bad input file or usage, 3 numerical failure,
4 non-consistent initial condition under ``--unique``, 5 input sequence too
short for the anticausal window.  Diagnostics go to stderr; data goes to
stdout unless ``--output`` is given.  The environment variable
``DESCRIPTOR_SOLVE_TOL`` overrides the default consistency tolerance.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .errors import (
    DescriptorError,
    InsufficientHorizonError,
    NotConsistentError,
    NotRegularError,
    ParseError,
)
from .oracle import residual_check
from .pencil import Pencil, classify
from .serialize import (
    encode_classification,
    encode_residual_report,
    encode_trajectory,
    encode_verdict,
    load_system,
    require_initial_condition,
    trajectory_csv,
    write_result,
)
from .solver import (
    CONSISTENCY_RTOL,
    InputSequence,
    check_consistency,
    optimal_solution_with_input,
    unique_solution,
)
from .weierstrass import decompose

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERICAL = 3
EXIT_NOT_CONSISTENT = 4
EXIT_HORIZON = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="descriptor-solve",
        description="Analyze and solve singular linear discrete-time systems "
        "F y[k+1] = G y[k] + v[k].",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("file", help="system definition file (JSON)")
        p.add_argument(
            "--tol",
            type=float,
            default=None,
            help="relative consistency tolerance (default 1e-8, or "
            "DESCRIPTOR_SOLVE_TOL when set)",
        )
        p.add_argument("--output", type=Path, default=None, help="write result here instead of stdout")

    add_common(sub.add_parser("analyze", help="classify the pencil"))
    add_common(sub.add_parser("check", help="consistency verdict for Y0"))

    solve = sub.add_parser("solve", help="emit a trajectory")
    add_common(solve)
    mode = solve.add_mutually_exclusive_group()
    mode.add_argument("--auto", dest="mode", action="store_const", const="auto",
                      help="unique when consistent, else optimal (default)")
    mode.add_argument("--unique", dest="mode", action="store_const", const="unique",
                      help="require a consistent initial condition")
    mode.add_argument("--optimal", dest="mode", action="store_const", const="optimal",
                      help="least-squares optimal solution")
    solve.set_defaults(mode="auto")
    solve.add_argument("--verify", action="store_true",
                       help="append an independently recomputed residual report")
    solve.add_argument("--pad-zero", action="store_true",
                       help="extend a short input sequence with zeros (changes the problem)")
    solve.add_argument("--extend-forced", action="store_true",
                       help="allow the optimal solve with nonzero inputs")
    solve.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _tolerance(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("DESCRIPTOR_SOLVE_TOL")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise ParseError(f"DESCRIPTOR_SOLVE_TOL is not a number: {env!r}") from exc
    return CONSISTENCY_RTOL


def _tolerances_used(tol: float) -> dict:
    return {"consistency": float(tol), "zero_determinant": 1e-10, "separation_gap_factor": 16.0}


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _inputs_from(system) -> InputSequence:
    if system["V"] is None:
        return InputSequence.zero(system["F"].shape[0])
    return InputSequence(values=system["V"])


def run_analyze(args) -> int:
    tol = _tolerance(args)
    system = load_system(args.file)
    pencil = Pencil.from_arrays(system["F"], system["G"])
    classification = classify(pencil)
    decomposition = decompose(pencil, classification.spectrum) if classification.is_regular else None
    result = {
        "classification": encode_classification(classification, decomposition),
        "version": __version__,
        "tolerances": _tolerances_used(tol),
    }
    _emit(write_result(result), args.output)
    return EXIT_OK


def run_check(args) -> int:
    tol = _tolerance(args)
    system = load_system(args.file)
    y0 = require_initial_condition(system)
    pencil = Pencil.from_arrays(system["F"], system["G"])
    classification = classify(pencil)
    if not classification.is_regular:
        raise NotRegularError(f"pencil is {classification.kind.value}; cannot check consistency")
    decomposition = decompose(pencil, classification.spectrum)
    verdict = check_consistency(decomposition, y0, _inputs_from(system), tol=tol)
    result = {
        "classification": encode_classification(classification, decomposition),
        "consistency": encode_verdict(verdict),
        "version": __version__,
        "tolerances": _tolerances_used(tol),
    }
    _emit(write_result(result), args.output)
    return EXIT_OK


def run_solve(args) -> int:
    tol = _tolerance(args)
    system = load_system(args.file)
    y0 = require_initial_condition(system)
    pencil = Pencil.from_arrays(system["F"], system["G"])
    classification = classify(pencil)
    if not classification.is_regular:
        raise NotRegularError(f"pencil is {classification.kind.value}; cannot solve")
    decomposition = decompose(pencil, classification.spectrum)
    inputs = _inputs_from(system)
    horizon = system["horizon"]

    if args.mode == "unique":
        trajectory = unique_solution(
            decomposition, y0, inputs, horizon, tol=tol, pad_zero=args.pad_zero
        )
    elif args.mode == "optimal":
        trajectory = optimal_solution_with_input(
            decomposition, y0, inputs, horizon,
            extend_forced=args.extend_forced, pad_zero=args.pad_zero,
        )
    else:
        verdict = check_consistency(decomposition, y0, inputs, tol=tol, pad_zero=args.pad_zero)
        if verdict.consistent:
            trajectory = unique_solution(
                decomposition, y0, inputs, horizon, tol=tol, pad_zero=args.pad_zero
            )
        else:
            trajectory = optimal_solution_with_input(
                decomposition, y0, inputs, horizon,
                extend_forced=args.extend_forced, pad_zero=args.pad_zero,
            )

    if args.format == "csv":
        if args.verify:
            raise ParseError("--verify output is not representable in CSV; use --format json")
        _emit(trajectory_csv(trajectory), args.output)
        return EXIT_OK

    verdict = check_consistency(decomposition, y0, inputs, tol=tol, pad_zero=True)
    result = {
        "classification": encode_classification(classification, decomposition),
        "consistency": encode_verdict(verdict),
        "trajectory": encode_trajectory(trajectory),
        "version": __version__,
        "tolerances": _tolerances_used(tol),
    }
    if args.verify:
        report = residual_check(
            pencil.F, pencil.G, system["V"], trajectory,
            tol=1e-8 if args.mode != "unique" else 1e-10,
        )
        result["residuals"] = encode_residual_report(report)
    _emit(write_result(result), args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    runners = {"analyze": run_analyze, "check": run_check, "solve": run_solve}
    try:
        return runners[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotConsistentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONSISTENT
    except InsufficientHorizonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HORIZON
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DescriptorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
