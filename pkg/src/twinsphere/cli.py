"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 range/limit error.
Environment: TWINSPHERE_THREADS, TWINSPHERE_SEGMENT_SPAN, TWINSPHERE_MEMORY_MB.
"""
from __future__ import annotations

import argparse
import json
import math
import logging
import sys
from typing import Sequence

from . import chebyshev, counting, fit, series, sieve, sphere_group, structure
from .errors import RangeError, TwinSphereError

EXIT_OK, EXIT_USAGE, EXIT_RANGE = 0, 2, 3


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _point(text: str) -> tuple[int, ...]:
    try:
        coords = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"point must be x1,x2,x3,x4, got {text!r}")
    if len(coords) != 4:
        raise argparse.ArgumentTypeError(f"point must have four coordinates, got {text!r}")
    return coords


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _perf_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=_positive, default=None, help="worker threads (default: all cores)")
    p.add_argument("--segment-span", type=_positive, default=None, help="n-values per sieve chunk")
    p.add_argument("--memory-budget", type=_positive, default=None, metavar="MB",
                   help="derive the chunk span from a per-worker memory budget")


def _span(args) -> int | None:
    if args.segment_span:
        return args.segment_span
    if args.memory_budget:
        return max(1024, args.memory_budget * 2**20 // 56)
    return None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twinsphere", description="The 3-sphere mod n, its point counts and the twin-prime series.")
    ap.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="R4(n) by enumeration and by formula")
    p.add_argument("n", type=_positive)
    p.add_argument("--limit", type=_positive, default=counting.ENUMERATION_LIMIT)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("prime-test", help="sphere primality criterion")
    p.add_argument("n", type=int)
    p.add_argument("--mode", choices=["enumerate", "factor"], default="enumerate")

    p = sub.add_parser("twin-test", help="sphere twin-prime criterion")
    p.add_argument("n", type=int)

    p = sub.add_parser("series", help="partial sums of omega(s) up to m")
    p.add_argument("--s", type=float, action="append", required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--exact", action="store_true", help="exact-audit summands (m <= 1e6, slow)")
    p.add_argument("--checkpoint", default=None, help="append/resume chunk records in this file")
    p.add_argument("--format", choices=["csv", "json", "text"], default="text")
    p.add_argument("--output", default=None)
    _perf_args(p)

    p = sub.add_parser("table", help="pi_2(2m+3) and tau(s, m) at m = 10, 100, ..., 10^max_exp")
    p.add_argument("--max-exp", type=_positive, default=6)
    p.add_argument("--s", type=float, nargs="+", default=[1.0, 2.0, 3.0])
    p.add_argument("--format", choices=["csv", "json", "text"], default="csv")
    p.add_argument("--output", default=None)
    _perf_args(p)

    p = sub.add_parser("group", help="calculator on S(Z/n)")
    p.add_argument("op", choices=["mul", "pow", "order", "inv"])
    p.add_argument("--mod", type=_positive, required=True)
    p.add_argument("--point", type=_point, required=True)
    p.add_argument("--other", type=_point, help="second operand for mul")
    p.add_argument("--k", type=int, help="multiplier for pow (negative uses the inverse)")

    p = sub.add_parser("structure", help="quotients, isomorphisms and cosets of S(Z/p)")
    p.add_argument("op", choices=["quotient", "iso", "cosets"])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("fit", help="fit a - b/(x^2 + c) to tau(2, 10^x)")
    p.add_argument("--max-exp", type=_positive, default=6)
    p.add_argument("--synthetic", action="store_true", help="fit noise-free samples of the reference model")
    _perf_args(p)

    p = sub.add_parser("conjecture", help="scan the block-sum conjectures")
    p.add_argument("which", choices=["a", "b"])
    p.add_argument("--m-min", type=_positive, default=10)
    p.add_argument("--m-max", type=_positive, default=1000)
    p.add_argument("--step", type=_positive, default=1)
    p.add_argument("--s", type=float, default=3.0)
    p.add_argument("--tau3", type=float, default=series.TAU3_LIMIT)
    p.add_argument("--format", choices=["csv", "text"], default="text")

    p = sub.add_parser("hl-estimate", help="Hardy-Littlewood estimate of pi_2(x)")
    p.add_argument("x", type=float)
    p.add_argument("--compare", action="store_true", help="also count pi_2(x) with the sieve")
    return ap


# --- commands ----------------------------------------------------------


def cmd_count(args) -> str:
    n = args.n
    formula = counting.r4_formula(n)
    try:
        enum = counting.r4_bruteforce(n, limit=args.limit)
    except RangeError:
        enum = None
    if args.format == "json":
        return json.dumps({"n": n, "r4_formula": formula, "r4_enumeration": enum,
                           "agree": None if enum is None else enum == formula}) + "\n"
    lines = [f"n = {n}", f"r4 (formula) = {formula}"]
    if enum is None:
        lines.append(f"r4 (enumeration) = skipped, n > {args.limit}")
    else:
        lines.append(f"r4 (enumeration) = {enum}")
        lines.append("methods agree" if enum == formula else "METHODS DISAGREE")
    if n % 2 and n >= 3:
        lines.append(f"n^3 - n = {n**3 - n}")
    return "\n".join(lines) + "\n"


def cmd_prime_test(args) -> str:
    ok = counting.prime_test_sphere(args.n, args.mode)
    return f"{args.n} {'is' if ok else 'is not'} prime (R4(n) {'=' if ok else '<'} n^3 - n)\n"


def cmd_twin_test(args) -> str:
    lhs, rhs = counting.twin_sides(args.n)
    ok = lhs == rhs
    return (f"lhs = {lhs}\nrhs = {rhs}\n"
            f"{args.n}, {args.n + 2} {'are' if ok else 'are not'} twin primes\n")


def cmd_series(args) -> str:
    if args.exact:
        results = {s: series.omega_partial(s, args.m, mode="exact-audit") for s in args.s}
    else:
        accs = series.run_series(args.s, args.m, threads=args.threads, chunk=_span(args),
                                 checkpoint_file=args.checkpoint, progress=args.verbose)
        results = {s: series.OmegaPartial(a.omega, a.twin_hits, a.tau_value) for s, a in accs.items()}
    pi2 = next(iter(results.values())).pi2
    record = {"m": args.m, "pi2": pi2}
    for s, r in results.items():
        record[f"tau{s:g}"] = r.tau
        record[f"omega{s:g}"] = r.omega
    if args.format == "json":
        return json.dumps(record) + "\n"
    cells = {k: series.format_float(v) if isinstance(v, float) else str(v) for k, v in record.items()}
    if args.format == "csv":
        return ",".join(cells) + "\n" + ",".join(cells.values()) + "\n"
    return "".join(f"{k} = {v}\n" for k, v in cells.items())


def cmd_table(args) -> str:
    rows = series.reproduce_table(args.s, range(1, args.max_exp + 1), threads=args.threads,
                                  chunk=_span(args), progress=args.verbose)
    if args.format == "csv":
        return series.table_to_csv(rows)
    recs = series.table_to_records(rows)
    if args.format == "json":
        return json.dumps(recs, indent=1) + "\n"
    return "".join("  ".join(f"{k}={series.format_float(v) if isinstance(v, float) else v}"
                             for k, v in r.items()) + "\n" for r in recs)


def cmd_group(args) -> str:
    X = sphere_group.SpherePoint(args.point, args.mod)
    if args.op == "mul":
        if args.other is None:
            raise UsageError("group mul needs --other")
        return f"{sphere_group.add(X, sphere_group.SpherePoint(args.other, args.mod))}\n"
    if args.op == "inv":
        return f"{sphere_group.neg(X)}\n"
    if args.op == "pow":
        if args.k is None:
            raise UsageError("group pow needs --k")
        base = X if args.k >= 0 else sphere_group.neg(X)
        return f"{chebyshev.scalar_mul(base, abs(args.k))}\n"
    return f"{sphere_group.element_order(X)}\n"


def cmd_structure(args) -> str:
    p = args.p
    if args.op == "quotient":
        q = structure.quotient_by_H(p)
        return q.to_json() + "\n" if args.format == "json" else q.to_text()
    if args.op == "iso":
        q = structure.quotient_by_H(p)
        target = {3: 4, 5: 5}.get(p)
        if target is None:
            k = len(q)
            j = next((j for j in range(2, 20) if math.factorial(j) // 2 >= k), None)
            if j is not None and math.factorial(j) // 2 == k:
                return f"S(Z/{p})/H has order {k} = {j}!/2; only p = 3, 5 are checked against A_j\n"
            return f"S(Z/{p})/H has order {k}, which is not j!/2 for any integer j\n"
        mapping = structure.is_isomorphic(q, structure.alternating_group(target))
        a = structure.alternating_group(target)
        if args.format == "json":
            return json.dumps({"p": p, "target": f"A{target}",
                               "mapping": None if mapping is None else
                               {q.labels[i]: a.labels[j] for i, j in mapping.items()}}) + "\n"
        if mapping is None:
            return f"S(Z/{p})/H is not isomorphic to A{target}\n"
        body = "".join(f"  {q.labels[i]} -> {a.labels[j]}\n" for i, j in mapping.items())
        return f"S(Z/{p})/H is isomorphic to A{target}:\n{body}"
    r = structure.circle_and_coset_report(p)
    if args.format == "json":
        return json.dumps(r.__dict__) + "\n"
    return f"p = {p}\ncircle order = {r.circle_order}\n2-sphere points = {r.sphere2_count}\ncosets = {r.coset_count}\n"


def cmd_fit(args) -> str:
    if args.synthetic:
        samples = [(x, float(fit.tau2_model(x, *fit.REFERENCE_MODEL))) for x in range(1, 11)]
    else:
        rows = series.reproduce_table([2.0], range(1, args.max_exp + 1), threads=args.threads, chunk=_span(args))
        samples = [(r.log10_m, r.tau[2.0]) for r in rows]
    f = fit.fit_tau2_model(samples)
    return (f"a = {series.format_float(f.a)}\nb = {series.format_float(f.b)}\n"
            f"c = {series.format_float(f.c)}\nresidual = {f.residual_norm:.3e}\n")


def cmd_conjecture(args) -> str:
    if args.m_max < args.m_min:
        raise UsageError("--m-max must be >= --m-min")
    rows = series.check_conjectures(args.which, args.s, range(args.m_min, args.m_max + 1, args.step),
                                    tau3=args.tau3)
    lines = ["m,lhs,rhs,holds,margin"] if args.format == "csv" else []
    for r in rows:
        vals = [str(r.m), series.format_float(r.lhs), series.format_float(r.rhs), str(r.holds).lower(),
                series.format_float(r.margin)]
        lines.append(",".join(vals) if args.format == "csv" else "  ".join(vals))
    if args.format == "text":
        fails = sum(not r.holds for r in rows)
        lines.append(f"{len(rows) - fails}/{len(rows)} hold")
    return "\n".join(lines) + "\n"


def cmd_hl(args) -> str:
    e = series.hl_estimate(args.x)
    out = (f"C2 = {series.format_float(e.c2)}\nclosed form = {series.format_float(e.closed_form)}\n"
           f"integral form = {series.format_float(e.integral_form)}\n")
    if args.compare:
        out += f"pi2(x) = {sieve.twin_count(int(args.x))}\n"
    return out


COMMANDS = {
    "count": cmd_count, "prime-test": cmd_prime_test, "twin-test": cmd_twin_test,
    "series": cmd_series, "table": cmd_table, "group": cmd_group, "structure": cmd_structure,
    "fit": cmd_fit, "conjecture": cmd_conjecture, "hl-estimate": cmd_hl,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        text = COMMANDS[args.command](args)
    except RangeError as exc:
        print(f"twinsphere: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (UsageError, TwinSphereError, ValueError) as exc:
        print(f"twinsphere: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    _emit(text, getattr(args, "output", None))
    return EXIT_OK


def main() -> None:
    sys.exit(run())
