"""Command-line interface: ``demi eval``, ``demi table`` and ``demi verify``.

Standard output carries data only; diagnostics go to standard error.  Exit
codes: 0 success, 1 verification mismatch, 2 parse error, 3 domain error,
4 no convergence, 5 corpus error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import abel, conj, halfexp, quad
from .corpus import load_corpus, verify
from .errors import DemiError, ParseError
from .numerics import PrecisionContext, parse_decimal, render

FUNCTIONS = {
    "psi": lambda x, ctx, cfg: halfexp.psi(x, ctx, cfg),
    "ln-half": lambda x, ctx, cfg: halfexp.ln_half(x, ctx, cfg),
    "xi": lambda x, ctx, cfg: halfexp.xi(x, ctx, cfg),
    "xi-prime": lambda x, ctx, cfg: halfexp.xi_prime(x, ctx, cfg),
    "f": lambda x, ctx, cfg: quad.f_limit(x, ctx),
    "f-prime": lambda x, ctx, cfg: quad.f_prime(x, ctx),
    "h": lambda x, ctx, cfg: conj.h(x, ctx),
    "h-prime": lambda x, ctx, cfg: conj.h_prime(x, ctx),
    "A": lambda x, ctx, cfg: abel.A(x, ctx, cfg),
    "A-inverse": lambda x, ctx, cfg: abel.A_inverse(x, ctx, cfg),
    "C": lambda x, ctx, cfg: abel.solve_C(x, cfg).C,
}

TABLES = ("psi-positive", "psi-negative", "special", "ln-half")


def _digits(lo: int, hi: int):
    def check(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if not lo <= value <= hi:
            raise argparse.ArgumentTypeError(f"digits must lie in [{lo}, {hi}]")
        return value
    return check


def _config(ctx: PrecisionContext, k: int | None, N: int | None) -> abel.AbelSeriesConfig:
    try:
        if N is None:
            return abel.AbelSeriesConfig.default(ctx, k or abel.DEFAULT_K)
        return abel.AbelSeriesConfig(k or abel.DEFAULT_K, N, ctx)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _emit(rows: list[dict], fmt: str, text_keys: list[str]) -> str:
    if fmt == "json":
        payload = rows[0] if len(rows) == 1 else rows
        return json.dumps(payload, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        flat = [{k: v for k, v in r.items() if not isinstance(v, dict)} for r in rows]
        writer = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(flat)
        return buf.getvalue().rstrip("\n")
    return "\n".join("\t".join(str(r[k]) for k in text_keys) for r in rows)


def cmd_eval(args) -> int:
    ctx = PrecisionContext(args.digits)
    x = parse_decimal(args.x, ctx)
    cfg = _config(ctx, args.k, args.N)
    start = time.perf_counter()
    value = FUNCTIONS[args.function](x, ctx, cfg)
    ms = (time.perf_counter() - start) * 1000
    record = {
        "function": args.function,
        "input": args.x,
        "value": render(value, args.digits),
        "digits": args.digits,
        "config": {"k": cfg.k, "N": cfg.N, "max_exponent": ctx.max_exponent},
    }
    if args.format == "json":
        record["ms"] = round(ms, 1)
    print(_emit([record], args.format, ["value"]))
    return 0


def _table_rows(which: str, ctx: PrecisionContext) -> list[dict]:
    d = ctx.decimal_digits
    if which in ("psi-positive", "psi-negative"):
        xs = range(3, 11) if which == "psi-positive" else range(-3, -11, -1)
        return [{"x": str(x), "psi": render(halfexp.psi(x, ctx), d)} for x in xs]
    if which == "ln-half":
        return [{"x": str(x), "ln_half": render(halfexp.ln_half(x, ctx), d)} for x in (2, 3)]

    def show(v):
        if v is None:
            return "."
        if ctx.mp.isinf(v):
            return "-inf" if v < 0 else "inf"
        # landmark entries are exact integers; residue below 10**-d is noise
        return render(ctx.mp.zero if abs(v) < ctx.tol else v, d)

    return [{"label": r.label, "x": show(r.x), "exp_half": show(r.exp_half), "ln_half": show(r.ln_half)}
            for r in halfexp.special_values(ctx)]


def cmd_table(args) -> int:
    ctx = PrecisionContext(args.digits)
    rows = _table_rows(args.which, ctx)
    print(_emit(rows, args.format, list(rows[0])))
    return 0


def cmd_verify(args) -> int:
    ctx = PrecisionContext(args.digits)
    records = load_corpus(args.corpus)
    results = verify(records, ctx, args.only)
    if not results:
        print(f"no corpus record matches {args.only!r}", file=sys.stderr)
        return 1
    report = {
        "digits": args.digits,
        "passed": all(r.passed for r in results),
        "records": [{"name": r.name, "required": r.required, "matched": r.matched,
                     "passed": r.passed, "ms": round(r.ms, 1)} for r in results],
    }
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}\t{r.name}\t{r.matched}/{r.required}")
    for r in results:
        if not r.passed:
            print(f"mismatch: {r.name} matched {r.matched} digits, needs {r.required}",
                  file=sys.stderr)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="demi", description="Half-iterates of exp, ln, e**x - 1 and 1 + x**2.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one function")
    p.add_argument("function", choices=sorted(FUNCTIONS))
    p.add_argument("x")
    p.add_argument("--digits", type=_digits(10, 200), default=40)
    p.add_argument("--k", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("table", help="print a table of half-exponential values")
    p.add_argument("which", choices=TABLES)
    p.add_argument("--digits", type=_digits(10, 120), default=40)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(run=cmd_table)

    p = sub.add_parser("verify", help="replay the reference-constant corpus")
    p.add_argument("--digits", type=_digits(10, 200), default=30)
    p.add_argument("--only", metavar="PATTERN")
    p.add_argument("--corpus", metavar="PATH")
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except DemiError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
