"""Command-line front end: ``fracseries eval | sweep | compare``.

Exit codes: 0 success, 2 usage or parse error, 3 mathematical domain or
convergence error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from .analysis import closed_form_value
from .errors import FracSeriesError, ParseError
from .fracops import DEFAULT_N, eval_series_current, eval_series_initial, eval_taylor_formula
from .funcmodel import AnalyticFn
from .grammar import parse_function
from .operators import Evaluation, Expansion, OperatorKind, OperatorSpec, PiecewiseOrder, Representation
from .oracle import quad_operator

__all__ = ["main", "build_parser", "format_number", "grid", "error_norm"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

METHODS = ("closed", "series-initial", "series-current", "taylor-formula", "quadrature")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def format_number(x: float | None) -> str:
    """Shortest round-trip decimal; empty for a missing value."""
    if x is None:
        return ""
    return repr(float(x))


def grid(t_start: float, t_end: float, step: float) -> list[float]:
    """t_start + i*step for i = 1..M, the half-open grid (t_start, t_end]."""
    if not step > 0.0:
        raise UsageError("--step must be positive")
    if not t_start < t_end:
        raise UsageError("--t-start must be below --t-end")
    m = math.floor((t_end - t_start) / step + 1e-9)
    return [t_start + i * step for i in range(1, m + 1)]


def error_norm(values: Sequence[float], reference: Sequence[float]) -> float:
    """Euclidean norm of the pointwise differences."""
    return math.sqrt(math.fsum((v - r) ** 2 for v, r in zip(values, reference)))


@dataclass(frozen=True)
class Method:
    name: str
    N: int
    label: str


def _parse_method(text: str, default_N: int) -> Method:
    name, sep, n_text = text.partition(":")
    if name not in METHODS and name != "auto":
        raise UsageError(f"unknown method {name!r}; expected one of {', '.join(METHODS)}")
    if not sep:
        return Method(name, default_N, text)
    try:
        N = int(n_text)
    except ValueError:
        raise UsageError(f"bad truncation level in method {text!r}") from None
    if N < 0:
        raise UsageError(f"negative truncation level in method {text!r}")
    return Method(name, N, text)


def _parse_piecewise(text: str) -> PiecewiseOrder:
    ends, orders = [], []
    for item in text.split(","):
        end, sep, order = item.partition(":")
        if not sep:
            raise UsageError(f"--alpha-piecewise entry {item!r} is not of the form t:alpha")
        try:
            ends.append(float(end))
            orders.append(float(order))
        except ValueError:
            raise UsageError(f"--alpha-piecewise entry {item!r} is not numeric") from None
    return PiecewiseOrder(tuple(ends), tuple(orders))


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--fn", required=True, help="function expression, e.g. exp:lambda=2")
    p.add_argument("--op", required=True, choices=[k.value for k in OperatorKind])
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-piecewise", help="segment ends and orders, t1:a1,t2:a2,...")
    p.add_argument("--a", type=float, default=0.0, help="initial instant (accepts -inf)")
    p.add_argument("--N", type=int, default=DEFAULT_N)
    p.add_argument("--expansion", choices=[e.value for e in Expansion], default=Expansion.INITIAL.value)
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--quad-tol", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracseries", description="Series evaluation of fractional operators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate at a single point")
    _add_common(ev)
    ev.add_argument("--t", type=float, required=True)
    ev.add_argument("--method", default="auto", help="auto or one of " + ", ".join(METHODS))

    for name, help_text in (("sweep", "evaluate over a time grid"), ("compare", "compare methods on a grid")):
        sp = sub.add_parser(name, help=help_text)
        _add_common(sp)
        sp.add_argument("--t-start", type=float, required=True)
        sp.add_argument("--t-end", type=float, required=True)
        sp.add_argument("--step", type=float, required=True)
        sp.add_argument("--method", action="append", help="method[:N]; repeat for several columns")
    return parser


@dataclass(frozen=True)
class _Job:
    f: AnalyticFn
    spec: OperatorSpec
    expansion: Expansion
    quad_tol: float


def _job(args) -> _Job:
    if (args.alpha is None) == (args.alpha_piecewise is None):
        raise UsageError("give exactly one of --alpha and --alpha-piecewise")
    f = parse_function(args.fn)
    kind = OperatorKind(args.op)
    if args.alpha is not None:
        spec = OperatorSpec.create(kind, args.alpha, args.a)
    else:
        spec = OperatorSpec(kind, _parse_piecewise(args.alpha_piecewise), args.a)
    if args.N < 0:
        raise UsageError("--N must be non-negative")
    return _Job(f, spec, Expansion(args.expansion), args.quad_tol)


def _evaluate(job: _Job, method: Method, t: float) -> Evaluation:
    spec = job.spec if job.spec.is_constant else job.spec.at_order(job.spec.order_at(t))
    name = method.name
    if name == "auto":
        if not job.f.analytic:
            name = "closed"
        else:
            name = "series-current" if job.expansion is Expansion.CURRENT else "series-initial"
    if name == "closed":
        return closed_form_value(job.f, spec, t)
    if name == "series-initial":
        return eval_series_initial(job.f, spec, t, method.N)
    if name == "series-current":
        return eval_series_current(job.f, spec, t, method.N)
    if name == "taylor-formula":
        return eval_taylor_formula(job.f, spec, t, method.N, job.quad_tol, job.expansion)
    r = quad_operator(job.f, spec.kind, spec.alpha, spec.a, t, job.quad_tol)
    return Evaluation(r.value, Representation.QUADRATURE, None, None)


def _rows_to_text(rows: list[list[str]]) -> str:
    return "".join(",".join(r) + "\n" for r in rows)


def _cmd_eval(args, job: _Job) -> tuple[str, list[str]]:
    method = _parse_method(args.method, args.N)
    ev = _evaluate(job, method, args.t)
    rows = [
        ["t", "value", "bound", "representation", "N"],
        [
            format_number(args.t),
            format_number(ev.value),
            format_number(ev.bound),
            ev.representation.value,
            "" if ev.N is None else str(ev.N),
        ],
    ]
    return _rows_to_text(rows), []


def _methods(args) -> list[Method]:
    texts = args.method or ["auto"]
    return [_parse_method(m, args.N) for m in texts]


def _columns(job: _Job, methods: list[Method], ts: list[float]) -> list[list[float]]:
    return [[_evaluate(job, m, t).value for t in ts] for m in methods]


def _cmd_sweep(args, job: _Job) -> tuple[str, list[str]]:
    methods = _methods(args)
    ts = grid(args.t_start, args.t_end, args.step)
    cols = _columns(job, methods, ts)
    header = ["t", "value"] if len(methods) == 1 else ["t", *(m.label for m in methods)]
    rows = [header] + [[format_number(t), *(format_number(c[i]) for c in cols)] for i, t in enumerate(ts)]
    return _rows_to_text(rows), []


def _cmd_compare(args, job: _Job) -> tuple[str, list[str]]:
    methods = _methods(args)
    if len(methods) < 2:
        raise UsageError("compare needs at least two --method flags")
    ts = grid(args.t_start, args.t_end, args.step)
    cols = _columns(job, methods, ts)
    ref = cols[0]
    header = ["t", *(m.label for m in methods), *(f"absdiff_{m.label}" for m in methods[1:])]
    rows = [header]
    for i, t in enumerate(ts):
        rows.append(
            [
                format_number(t),
                *(format_number(c[i]) for c in cols),
                *(format_number(abs(c[i] - ref[i])) for c in cols[1:]),
            ]
        )
    summary = [
        f"E({m.label} vs {methods[0].label}) = {format_number(error_norm(c, ref))}"
        for m, c in zip(methods[1:], cols[1:])
    ]
    return _rows_to_text(rows), summary


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-inf" or "-1e4" as an option flag; bind them to their option instead
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt is not None and nxt.startswith("-"):
            try:
                float(nxt)
            except ValueError:
                pass
            else:
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


_COMMANDS = {"eval": _cmd_eval, "sweep": _cmd_sweep, "compare": _cmd_compare}


def main(argv: Sequence[str] | None = None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        help_out = io.StringIO()
        try:
            with contextlib.redirect_stdout(help_out):
                args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            sys.stdout.write(help_out.getvalue())
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
        job = _job(args)
        text, summary = _COMMANDS[args.command](args, job)
    except (UsageError, ParseError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (FracSeriesError, ValueError, OverflowError, ArithmeticError) as exc:
        print(f"fracseries: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"fracseries: {exc}", file=sys.stderr)
        return EXIT_IO
    stream = sys.stdout if args.out else sys.stderr
    for line in summary:
        print(line, file=stream)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
