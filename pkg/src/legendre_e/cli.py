"""Command-line front end.

Subcommands::

    eval     certified enclosure of E(lambda, k) at one point
    table    regenerate comparison tables 1-3, optionally checking printed values
    regions  write the convergence-region grid of the two auxiliary expansions
    bench    time every method over a grid and check that each enclosure holds

Numbers are printed with ``format(x, ".12g")``: twelve significant digits,
correctly rounded from the binary value (ties to even), so output is stable
across runs and platforms.

Exit codes: 0 success, 1 usage error, 2 domain or numerical error,
3 check failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import aux_expansions, baseline, first_expansion, second_expansion, special, tables
from .core import Enclosure, EvalPoint, evaluate
from .errors import ConvergenceError, DomainError
from .second_expansion import DEFAULT_DELTA

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_CHECK = 0, 1, 2, 3
DIGITS = 12
METHODS = ("first", "second", "aux-bf", "aux-carlson", "baseline", "auto")
TABLE_HEADER = ("lambda", "k", "E", "approx", "refined", "rel_err", "rel_err_refined", "range")
TABLE3_HEADER = ("lambda", "k", "E", "approx", "rel_err", "delta1", "delta2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x: float) -> str:
    return format(x, f".{DIGITS}g")


# ---- eval ------------------------------------------------------------------

def _enclose(p: EvalPoint, method: str, N: int, eps: float, delta: float):
    """(enclosure, refined estimate or None) for one method."""
    if not p.interior():
        return evaluate(p, N), None
    if method == "auto":
        method = "second" if 1.0 - p.lam <= 1.0 - p.k else "first"
    if method == "first":
        return first_expansion.enclose_first(p, N), first_expansion.refined_E_hat(p, N, eps).estimate
    if method == "second":
        return second_expansion.enclose_second(p, N), second_expansion.refined_E_bar(p, N, delta).estimate
    if method == "aux-bf":
        return aux_expansions.enclose_bf(p, N), None
    if method == "aux-carlson":
        return aux_expansions.enclose_carlson(p, N), None
    return baseline.enclose_baseline(p), None


def cmd_eval(args, out) -> int:
    p = EvalPoint(args.lam, args.k)
    enc, refined = _enclose(p, args.method, args.order, args.eps, args.delta)
    record = {
        "lambda": p.lam,
        "k": p.k,
        "method": enc.method.value,
        "order": enc.order,
        "estimate": enc.estimate,
        "lower": enc.lower,
        "upper": enc.upper,
    }
    if refined is not None:
        record["refined"] = refined
    if args.oracle:
        e = special.oracle_E(p)
        record["oracle"] = e
        record["rel_err"] = (e - enc.estimate) / e if e != 0 else 0.0
        if refined is not None:
            record["rel_err_refined"] = (e - refined) / e if e != 0 else 0.0
    if args.format == "json":
        shown = {key: (fmt(v) if isinstance(v, float) else v) for key, v in record.items()}
        out.write(json.dumps(shown) + "\n")
    else:
        for key, v in record.items():
            out.write(f"{key:<16}{fmt(v) if isinstance(v, float) else v}\n")
    return EXIT_OK


# ---- table -----------------------------------------------------------------

def _row_values(which: int, row) -> list[float]:
    return [getattr(row, c) for c in tables.value_columns(which)]


def cmd_table(args, out) -> int:
    rows = tables.build_table(args.which, args.eps, args.delta)
    header = TABLE3_HEADER if args.which == 3 else TABLE_HEADER
    if args.which != 3:
        header = header + ("N",)
    lines = []
    for row in rows:
        cells = [fmt(v) for v in _row_values(args.which, row)]
        if args.which != 3:
            cells.append(str(row.order))
        lines.append(cells)
    if args.format == "md":
        out.write("| " + " | ".join(header) + " |\n")
        out.write("|" + "---|" * len(header) + "\n")
        for cells in lines:
            out.write("| " + " | ".join(cells) + " |\n")
    else:
        out.write(",".join(header) + "\n")
        for cells in lines:
            out.write(",".join(cells) + "\n")
    if not args.check:
        return EXIT_OK

    bad = tables.check_table(args.which, rows)
    n = len(rows)
    failed_rows = sorted({m.row for m in bad})
    out.write(f"check table {args.which}: {n - len(failed_rows)}/{n} rows match, "
              f"{len(bad)} cell mismatches\n")
    for m in bad:
        row = rows[m.row]
        extra = f"  ({m.note})" if m.note else ""
        out.write(f"  row {m.row + 1} (lambda={row.lam:g}, k={row.k:g}) {m.column}: "
                  f"printed {m.printed}, computed {fmt(m.computed)}{extra}\n")
    return EXIT_CHECK if bad else EXIT_OK


# ---- regions ---------------------------------------------------------------

def cmd_regions(args, out) -> int:
    rows = aux_expansions.region_grid(args.resolution)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            counts = aux_expansions.write_region_csv(rows, fh)
    else:
        counts = aux_expansions.write_region_csv(rows, out)
    summary = " ".join(f"{key}={v}" for key, v in counts.items())
    # the summary goes to stderr when the CSV itself is on stdout
    (out if args.out else sys.stderr).write(f"regions resolution={args.resolution} {summary}\n")
    return EXIT_CHECK if counts["neither"] else EXIT_OK


# ---- bench -----------------------------------------------------------------

def _bench_grid(size: int) -> list[EvalPoint]:
    return [EvalPoint(i / (size + 1), j / (size + 1))
            for i in range(1, size + 1) for j in range(1, size + 1)]


def _bench_methods(orders):
    """(label, applicable(p), call(p, N)) for every method."""
    def always(p):
        return True

    def cond1(p):
        return aux_expansions.classify(p).cond1

    def cond2(p):
        return aux_expansions.classify(p).cond2

    return [
        ("first", always, first_expansion.enclose_first),
        ("second", always, second_expansion.enclose_second),
        ("aux-bf", cond1, aux_expansions.enclose_bf),
        ("aux-carlson", cond2, aux_expansions.enclose_carlson),
        ("baseline", always, lambda p, N: baseline.enclose_baseline(p)),
    ]


def cmd_bench(args, out) -> int:
    points = _bench_grid(args.grid)
    oracle = [special.oracle_E(p) for p in points]
    violations = []
    out.write(f"bench grid={args.grid}x{args.grid} orders={','.join(map(str, args.orders))}\n")
    out.write(f"{'method':<12}{'N':>3}{'evals':>8}{'ns/eval':>12}"
              f"{'ns/eval lam>=k':>16}{'ns/eval lam<k':>15}{'max width':>14}\n")
    for label, applicable, call in _bench_methods(args.orders):
        orders = [None] if label == "baseline" else args.orders
        for N in orders:
            t_hi = t_lo = 0.0
            n_hi = n_lo = 0
            widest = 0.0
            for p, e in zip(points, oracle):
                if not applicable(p):
                    continue
                t0 = time.perf_counter_ns()
                enc: Enclosure = call(p, N)
                dt = time.perf_counter_ns() - t0
                if p.lam >= p.k:
                    t_hi, n_hi = t_hi + dt, n_hi + 1
                else:
                    t_lo, n_lo = t_lo + dt, n_lo + 1
                widest = max(widest, enc.width)
                if e not in enc:
                    violations.append((label, N, p, e, enc))
            n = n_hi + n_lo

            def avg(t, c):
                return f"{t / c:.0f}" if c else "-"

            out.write(f"{label:<12}{N if N else '-':>3}{n:>8}{avg(t_hi + t_lo, n):>12}"
                      f"{avg(t_hi, n_hi):>16}{avg(t_lo, n_lo):>15}{widest:>14.3e}\n")
    out.write(f"containment violations: {len(violations)}\n")
    for label, N, p, e, enc in violations[:20]:
        out.write(f"  {label} N={N} at ({p.lam:.17g}, {p.k:.17g}): E={fmt(e)} "
                  f"not in [{fmt(enc.lower)}, {fmt(enc.upper)}]\n")
    return EXIT_CHECK if violations else EXIT_OK


# ---- argument parsing ------------------------------------------------------

def _order_list(text: str) -> list[int]:
    try:
        orders = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid order list {text!r}")
    if not orders or min(orders) < 1:
        raise argparse.ArgumentTypeError("orders must be integers >= 1")
    return orders


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="legendre-e", description="Certified evaluation of E(lambda, k).")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tuning(sp):
        sp.add_argument("--eps", type=float, default=0.5,
                        help="order shift of the first-expansion refined estimate (default 0.5)")
        sp.add_argument("--delta", type=float, default=DEFAULT_DELTA,
                        help="weight of the upper bound in the second-expansion refined estimate "
                             "(default 67/187)")

    ev = sub.add_parser("eval", help="enclosure of E(lambda, k) at one point")
    ev.add_argument("--lambda", dest="lam", type=float, required=True)
    ev.add_argument("--k", type=float, required=True)
    ev.add_argument("--order", type=_positive_int, default=2)
    ev.add_argument("--method", choices=METHODS, default="auto")
    ev.add_argument("--oracle", action="store_true", help="also print the reference value")
    ev.add_argument("--format", choices=("text", "json"), default="text")
    tuning(ev)

    tb = sub.add_parser("table", help="regenerate table 1, 2 or 3")
    tb.add_argument("which", type=int, choices=(1, 2, 3))
    tb.add_argument("--format", choices=("csv", "md"), default="csv")
    tb.add_argument("--check", action="store_true", help="compare with the printed values")
    tuning(tb)

    rg = sub.add_parser("regions", help="convergence regions of the auxiliary expansions")
    rg.add_argument("--resolution", type=int, default=512)
    rg.add_argument("--out", help="CSV path (default: stdout)")

    bn = sub.add_parser("bench", help="timing and soundness sweep")
    bn.add_argument("--grid", type=_positive_int, default=50, help="points per axis (default 50)")
    bn.add_argument("--orders", type=_order_list, default=[1, 2, 3],
                    help="comma-separated orders (default 1,2,3)")
    return ap


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "regions": cmd_regions, "bench": cmd_bench}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (DomainError, ConvergenceError, ArithmeticError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
