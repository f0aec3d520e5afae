"""``fraclimit`` command line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numeric-domain error (branch, pole, parameter, ...).
"""

from __future__ import annotations

import argparse
import contextlib
import os
import re
import sys
from typing import IO, Iterator, List, Optional, Sequence

from . import __version__
from .charpoly import DEFAULT_GRID_POINTS, DEFAULT_SEARCH, find_roots
from .errors import FracLimitError
from .functions import parse_function
from .gl_engine import MAX_N, convergence_sweep, gl_coupled, gl_partial_sum
from .specfun import Rational, as_rational
from .verify import CHECKS, run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

THREADS_ENV = "FRACLIMIT_THREADS"


class UsageError(Exception):
    pass


# {{{ parsing helpers


def fmt(value: Optional[float]) -> str:
    """17 significant digits, which round-trips any double."""
    if value is None:
        return ""
    return format(value, ".17g")


def parse_order(text: str) -> Rational:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid order {text!r}: expected p/s or a decimal") from exc


def parse_schedule(text: str) -> List[int]:
    """``a:b:g`` (geometric), ``n1,n2,...`` or a single integer."""
    text = text.strip()
    try:
        if ":" in text:
            a_s, b_s, g_s = text.split(":")
            a, b, g = float(a_s), float(b_s), float(g_s)
            if a < 1 or b < a or g <= 1:
                raise ValueError
            values = []
            i = 0
            while True:
                v = a * g**i
                if v > b * (1 + 1e-9):
                    break
                values.append(int(round(v)))
                i += 1
        else:
            values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"invalid schedule {text!r}: expected a:b:g or n1,n2,...") from exc

    if not values or any(v < 1 for v in values):
        raise UsageError(f"schedule {text!r} must contain positive integers")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError(f"schedule {text!r} is not strictly increasing after rounding")
    if values[-1] > MAX_N:
        raise UsageError(f"schedule {text!r} exceeds N = {MAX_N}")
    return values


def parse_search(text: str):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"invalid search interval {text!r}: expected lo:hi") from exc
    if hi <= lo:
        raise UsageError(f"empty search interval {text!r}")
    return lo, hi


def parse_function_arg(text: str):
    try:
        return parse_function(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def thread_count() -> Optional[int]:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be an integer >= 1, got {raw!r}")
    return n


@contextlib.contextmanager
def open_output(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def write_csv(out: IO[str], header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(row) + "\n")


# }}}


# {{{ commands


def cmd_eval(args: argparse.Namespace) -> int:
    f = parse_function_arg(args.function)
    R = parse_order(args.order)
    result = gl_coupled(f, args.x, R, args.q, args.n)
    lines = [
        ("function", args.function),
        ("order", str(R)),
        ("x", fmt(result.x)),
        ("q", fmt(result.q)),
        ("N", str(result.N)),
        ("h", fmt(result.h)),
        ("gl_value", fmt(result.gl_value)),
        ("rl_value", fmt(result.rl_value)),
        ("abs_error", fmt(result.abs_error)),
        ("handedness", str(result.handedness)),
    ]
    with open_output(args.output) as out:
        for key, value in lines:
            out.write(f"{key:<11}= {value}\n")
    return EXIT_OK


def cmd_roots(args: argparse.Namespace) -> int:
    R = parse_order(args.order)
    if "/" not in args.order and R.denominator % 2 == 0:
        print(
            f"warning: order {args.order} = {R} has an even denominator;"
            " negative-axis search disabled",
            file=sys.stderr,
        )
    search = parse_search(args.search) if args.search else DEFAULT_SEARCH
    result = find_roots(R, args.m, search, args.grid)
    for note in result.notes:
        print(f"note: {note}", file=sys.stderr)
    rows = [
        (fmt(r.q), fmt(r.residual), str(r.handedness), r.branch_note)
        for r in result.roots
    ]
    with open_output(args.output) as out:
        write_csv(out, ("q", "residual", "handedness", "branch_note"), rows)
    return EXIT_OK


def cmd_converge(args: argparse.Namespace) -> int:
    f = parse_function_arg(args.function)
    R = parse_order(args.order)
    schedule = parse_schedule(args.n)
    sweep = convergence_sweep(f, args.x, R, args.q, schedule, workers=thread_count())
    rows = [
        (
            str(r.N),
            fmt(r.h),
            fmt(r.gl_value),
            fmt(r.rl_value),
            fmt(r.abs_error),
            fmt(r.observed_order),
        )
        for r in sweep
    ]
    header = ("N", "h", "gl_value", "rl_value", "abs_error", "observed_order")
    with open_output(args.output) as out:
        write_csv(out, header, rows)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be positive")
    only = args.only or None
    if only:
        unknown = [n for n in only if n not in CHECKS]
        if unknown:
            raise UsageError(
                f"unknown check {unknown[0]!r}; choose from {', '.join(CHECKS)}"
            )
    results = run_checks(only, args.max_n)
    with open_output(args.output) as out:
        for r in results:
            out.write(r.format() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def cmd_diverge_demo(args: argparse.Namespace) -> int:
    f = parse_function_arg(args.function)
    R = parse_order(args.order)
    schedule = parse_schedule(args.n)
    rows = [(str(n), fmt(gl_partial_sum(f, args.x, R, args.h, n))) for n in schedule]
    with open_output(args.output) as out:
        write_csv(out, ("N", "partial_value"), rows)
    return EXIT_OK


# }}}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclimit",
        description="Grünwald-Letnikov sums with coupled limits h = q x / N.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", "-o", default=None, help="write to PATH instead of stdout")

    def problem(p: argparse.ArgumentParser, with_q: bool = True) -> None:
        p.add_argument(
            "--function",
            default="power:1",
            help="power:M, poly:c0,c1,..., taylor-exp[:K], taylor-sin[:K], taylor-cos[:K]",
        )
        p.add_argument("--order", required=True, help="derivative order, p/s or decimal")
        p.add_argument("--x", type=float, default=1.0, help="evaluation point")
        if with_q:
            p.add_argument("--q", type=float, default=1.0, help="coupling constant")

    p = sub.add_parser("eval", help="one coupled GL evaluation against the RL value")
    problem(p)
    p.add_argument("--n", type=int, required=True, help="truncation N")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("roots", help="real roots of the characteristic equation")
    p.add_argument("--order", required=True)
    p.add_argument("--m", type=int, default=1, help="power of the differentiand x^m")
    p.add_argument("--search", default=None, help="lo:hi (default -64:64)")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID_POINTS, help="scan points")
    common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("converge", help="convergence table over a schedule of N")
    problem(p)
    p.add_argument("--n", required=True, help="schedule a:b:g or n1,n2,...")
    common(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify", help="run the identity battery")
    p.add_argument("--only", action="append", help="run a single check (repeatable)")
    p.add_argument("--max-n", type=int, default=10**4, help="largest N for asymptotic checks")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diverge-demo", help="GL partial sums at a fixed step h")
    problem(p, with_q=False)
    p.add_argument("--h", type=float, required=True, help="fixed step")
    p.add_argument("--n", required=True, help="schedule a:b:g or n1,n2,...")
    common(p)
    p.set_defaults(func=cmd_diverge_demo)

    return parser


_VALUE_FLAGS = {"--q", "--x", "--h", "--search", "--order", "--n"}
_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _join_negative_values(argv: Sequence[str]) -> List[str]:
    # argparse takes "-64:64" for an option; rewrite as "--search=-64:64"
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracLimitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OverflowError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
