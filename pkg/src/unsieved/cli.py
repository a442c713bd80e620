"""Command-line front end.

Subcommands:
  rho         tabulate the smooth-number density rho(w)
  sigma       solve the integral equation for a kernel file
  bounds      lower/upper bounds on the limiting mean value, refined maxima
  table       byte-stable CSV of the bounds over a w range
  verify      integer-sieve vs integral-equation correspondence
  properties  invariant suite over the seeded random-kernel corpus

Exit codes: 0 success, 1 property violation, 2 usage/parse error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bounds import (asymptotic_lower_report, bounds_table, rows_to_csv,
                     rows_to_records)
from .dickman import (EXP_GAMMA, DickmanTable, ParameterError, RangeError,
                      build_dickman, rho)
from .kernel import (ChiKernel, KernelError, sandwich_bounds, solve_sigma)
from .sieve import MultiplicativeSpec, ResourceError, verify_correspondence


def _fmt(x: float, digits: int) -> str:
    return format(x, f".{digits}f")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="unsieved",
        description="Smooth-number densities, sieve integral equations and "
                    "mean values of multiplicative functions.")
    p.add_argument("--digits", type=int, default=6,
                   help="decimals in floating output (default 6)")
    p.add_argument("--format", choices=("csv", "json", "text"),
                   default="text", help="output format where applicable")
    sub = p.add_subparsers(dest="command", required=True)

    p_rho = sub.add_parser("rho", help="evaluate rho(w)")
    p_rho.add_argument("w", type=float, nargs="+")
    p_rho.add_argument("--step", type=float, default=2.0**-10)
    p_rho.add_argument("--w-max", type=float, default=None)

    p_sig = sub.add_parser("sigma", help="solve for sigma(u) from a kernel")
    p_sig.add_argument("u", type=float)
    p_sig.add_argument("--kernel", required=True, help="kernel file path")
    p_sig.add_argument("--step", type=float, default=2.0**-9)
    p_sig.add_argument("--u-max", type=float, default=None)

    p_bnd = sub.add_parser("bounds", help="refined bounds at given w")
    p_bnd.add_argument("w", type=float, nargs="+")
    p_bnd.add_argument("--step", type=float, default=2.0**-10)

    p_tab = sub.add_parser("table", help="CSV bounds table over a w range")
    p_tab.add_argument("--w-min", type=float, default=1.5)
    p_tab.add_argument("--w-max", type=float, default=2.0)
    p_tab.add_argument("--w-step", type=float, default=0.1)
    p_tab.add_argument("--step", type=float, default=2.0**-10)
    p_tab.add_argument("--delta-grid", type=float, default=0.1,
                       help="grid spacing for the lower-bound maximization; "
                            "0 means fully refined")

    p_ver = sub.add_parser("verify", help="integer-sieve correspondence")
    p_ver.add_argument("y", type=float)
    p_ver.add_argument("u", type=float)
    p_ver.add_argument("--spec", required=True, help="multiplicative spec file")
    p_ver.add_argument("--x-cap", type=int, default=10**8)
    p_ver.add_argument("--budget-constant", type=float, default=5.0)

    p_prop = sub.add_parser("properties", help="seeded corpus invariant suite")
    p_prop.add_argument("--seed", type=int, default=42)
    p_prop.add_argument("--count", type=int, default=100)

    return p


def cmd_rho(args) -> int:
    w_max = args.w_max if args.w_max is not None else max(args.w) + 1.0
    table = build_dickman(max(2.0, w_max), args.step)
    rows = [(w, rho(table, w)) for w in args.w]
    if args.format == "json":
        print(json.dumps([{"w": w, "rho": r} for w, r in rows],
                         sort_keys=True))
    elif args.format == "csv":
        print("w,rho")
        for w, r in rows:
            print(f"{_fmt(w, args.digits)},{_fmt(r, args.digits)}")
    else:
        for w, r in rows:
            print(f"rho({w:g}) = {_fmt(r, args.digits)}")
    return 0


def cmd_sigma(args) -> int:
    with open(args.kernel) as fh:
        kernel = ChiKernel.parse(fh.read())
    u_max = args.u_max if args.u_max is not None else math.ceil(args.u)
    if args.u > u_max:
        raise ParameterError(f"u={args.u} exceeds u_max={u_max}")
    sol = solve_sigma(kernel, u_max=float(u_max), step=args.step)
    sig = sol.sigma(args.u)
    e_u = sol.E(args.u)
    table = build_dickman(max(2.0, math.ceil(e_u) + 1.0), 2.0**-10)
    lo, hi = sandwich_bounds(kernel, args.u, 2, args.step)
    d = args.digits
    fields = {
        "sigma": sig,
        "E": e_u,
        "rho_of_E": rho(table, min(e_u, table.w_max)),
        "hall_upper": EXP_GAMMA / e_u,
        "sandwich_lower": lo,
        "sandwich_upper": hi,
    }
    if args.format == "json":
        print(json.dumps({"u": args.u, **fields}, sort_keys=True))
    elif args.format == "csv":
        print(",".join(fields))
        print(",".join(_fmt(v, d) for v in fields.values()))
    else:
        print(f"sigma({args.u:g})   = {_fmt(sig, d)}")
        print(f"E({args.u:g})       = {_fmt(e_u, d)}")
        print(f"rho(E(u))    = {_fmt(fields['rho_of_E'], d)}  (lower bound)")
        print(f"e^gamma/E(u) = {_fmt(fields['hall_upper'], d)}  (upper bound)")
        print(f"series sandwich: [{_fmt(lo, d)}, {_fmt(hi, d)}]")
    return 0


def cmd_bounds(args) -> int:
    w_max = 2.0 * max(args.w)
    table = build_dickman(max(2.0, w_max), args.step)
    rows = bounds_table(args.w, table, delta_grid=None)
    _emit_rows(rows, args)
    return 0


def cmd_table(args) -> int:
    if args.w_step <= 0:
        raise ParameterError("w-step must be positive")
    n = int(round((args.w_max - args.w_min) / args.w_step))
    w_list = [args.w_min + i * args.w_step for i in range(n + 1)]
    w_list = [w for w in w_list if w <= args.w_max + 1e-9]
    table = build_dickman(max(2.0, 2.0 * max(w_list)), args.step)
    dg = args.delta_grid if args.delta_grid > 0 else None
    rows = bounds_table(w_list, table, delta_grid=dg)
    if args.format == "json":
        print(json.dumps(rows_to_records(rows), sort_keys=True))
    else:
        sys.stdout.write(rows_to_csv(rows, digits=args.digits))
    return 0


def _emit_rows(rows, args) -> None:
    if args.format == "json":
        print(json.dumps(rows_to_records(rows), sort_keys=True))
    elif args.format == "csv":
        sys.stdout.write(rows_to_csv(rows, digits=args.digits))
    else:
        d = args.digits
        for r in rows:
            print(f"w={r.w:g}: lower {_fmt(r.lower_eq13, d)} "
                  f"(at Delta={_fmt(r.argmax_delta, d)}), "
                  f"upper {_fmt(r.best_upper, d)}")


def cmd_verify(args) -> int:
    with open(args.spec) as fh:
        spec = MultiplicativeSpec.parse(fh.read())
    lhs, rhs, budget = verify_correspondence(
        spec, args.y, args.u, c=args.budget_constant, x_cap=args.x_cap)
    ok = abs(lhs - rhs) <= budget
    d = args.digits
    if args.format == "json":
        print(json.dumps({"lhs": lhs, "rhs": rhs, "budget": budget,
                          "pass": ok}, sort_keys=True))
    else:
        print(f"integer mean value  = {_fmt(lhs, d)}")
        print(f"equation solution   = {_fmt(rhs, d)}")
        print(f"|difference|        = {_fmt(abs(lhs - rhs), d)}")
        print(f"error budget        = {_fmt(budget, d)}")
        print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_properties(args) -> int:
    from .corpus import run_property_suite
    summary = run_property_suite(seed=args.seed, count=args.count)
    print(json.dumps(summary, sort_keys=True, indent=2))
    return 0 if summary["n_violations"] == 0 else 1


_DISPATCH = {
    "rho": cmd_rho,
    "sigma": cmd_sigma,
    "bounds": cmd_bounds,
    "table": cmd_table,
    "verify": cmd_verify,
    "properties": cmd_properties,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _DISPATCH[args.command](args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, RangeError, KernelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
