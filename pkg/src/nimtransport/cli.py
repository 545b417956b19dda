"""Command-line entry point: ``nimtransport <group> <command> ...``.

Reports are JSON with every number written as an exact "p/q" string and
checks sorted by name, so identical inputs give byte-identical output.
Exit codes: 0 all asserted checks pass, 1 a check failed, 2 usage or input
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__, kernels
from .dyadic import Dyadic, format_rational, to_rational
from .fractal import FORMATS, WHAT, export_fractal
from .integral import I_eval, verify_integral, xor_integral_means
from .lp import experiments as ex
from .lp.model import (
    MarginalSpec,
    build_model,
    consistency_check,
    dual_objective,
    dual_potentials,
    product_cost,
    solve,
)
from .monotone import PointSet3, competitor_optimum, support_points
from .potential import (
    PotentialTable,
    check_identities,
    f_dyadic,
    grid_integral,
    homogeneity_check,
    lipschitz_check,
    table_agreement,
    verify_bound,
)
from .report import Report, dumps
from .transport import plan_cost, xor_left_cost, xor_plan

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# report-duality solves the LP only up to this level (8^n variables)
DUALITY_LP_MAX_LEVEL = 3


class UsageError(Exception):
    pass


def _run_report(command: str, reports: list[Report], **meta: Any) -> dict[str, Any]:
    checks = sorted((r.to_dict() for r in reports), key=lambda d: d["name"])
    return {
        "command": command,
        **meta,
        "passed": all(r.passed for r in reports),
        "checks": checks,
    }


def _emit(payload: Any, out: str | None) -> None:
    text = dumps(payload)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _finish(payload: dict[str, Any], args) -> int:
    _emit(payload, args.out)
    return EXIT_OK if payload.get("passed", True) else EXIT_FAIL


def _level(args, hi: int | None = None) -> int:
    n = args.level
    if n is None:
        raise UsageError("--level is required")
    if n < 0 or (hi is not None and n > hi):
        raise UsageError(f"--level must be in 0..{hi}")
    return n


def _table(args) -> PotentialTable | None:
    # --inject-fault flips f(1,1) so the harness can be seen to fail
    return PotentialTable(base={(1, 1): 3}) if getattr(args, "inject_fault", False) else None


def _potential_reports(n: int, table) -> list[Report]:
    reps = [verify_bound(n, table), check_identities(n, table), homogeneity_check(n, table)]
    top = min(n, 3)
    for a in range(top + 1):
        for b in range(a, top + 1):
            reps.append(lipschitz_check(a, b, table))
    if n <= kernels.MAX_TABLE_LEVEL and table is None:
        reps.append(table_agreement(n))
    return reps


# potential ----------------------------------------------------------------

def cmd_potential_eval(args) -> int:
    a, b = args.a, args.b
    table = _table(args)
    if args.level is not None:
        x, y = Dyadic(int(a), args.level), Dyadic(int(b), args.level)
        value = f_dyadic(x, y, table)
        payload = {"x": x, "y": y, "f_C": value}
    else:
        try:
            ia, ib = int(a), int(b)
        except ValueError:
            value = f_dyadic(a, b, table)
            payload = {"x": a, "y": b, "f_C": value}
        else:
            value = (table or PotentialTable())(ia, ib)
            payload = {"a": ia, "b": ib, "f": value}
    if args.format == "text":
        print(format_rational(value) if isinstance(value, Fraction) else value)
        return EXIT_OK
    _emit(payload, args.out)
    return EXIT_OK


def cmd_potential_verify(args) -> int:
    n = _level(args, 8)
    return _finish(_run_report("potential verify", _potential_reports(n, _table(args)), level=n), args)


# integral -----------------------------------------------------------------

def cmd_integral_eval(args) -> int:
    value = I_eval(args.a, args.b)
    if args.format == "text":
        print(format_rational(value))
        return EXIT_OK
    _emit({"a": args.a, "b": args.b, "I": value}, args.out)
    return EXIT_OK


def cmd_integral_verify(args) -> int:
    n = _level(args, 8)
    return _finish(_run_report("integral verify", verify_integral(n), level=n), args)


# lp -----------------------------------------------------------------------

def _load_problem(path: str):
    try:
        data = json.loads(Path(path).read_text())
        sizes = [int(s) for s in data["sizes"]]
        spec = MarginalSpec.create(sizes, int(data.get("k", 2)), data["marginals"])
        cost = data.get("cost", "xyz")
        if cost == "xyz":
            coords = data.get("coords") or [[Fraction(i, s) for i in range(s)] for s in sizes]
            cost = product_cost(coords)
        sense = data.get("sense", "min")
        return spec, build_model(spec, cost, sense)
    except (OSError, KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"cannot read problem {path}: {exc}") from exc


def _nested(table: dict[tuple, Fraction], shape: list[int]) -> Any:
    if len(shape) == 1:
        return [table[(i,)] for i in range(shape[0])]
    return [_nested({k[1:]: v for k, v in table.items() if k[0] == i}, shape[1:])
            for i in range(shape[0])]


def cmd_lp_solve(args) -> int:
    if not args.inp:
        raise UsageError("--in is required")
    spec, model = _load_problem(args.inp)
    cons = consistency_check(spec)
    cons.asserted = False  # an inconsistent spec is reported, not an error
    sol = solve(model)
    cert = Report("lp.certificate")
    cert.checked = 1
    if not sol.certified and sol.status != "unbounded":
        cert.fail(status=sol.status)
    payload = _run_report("lp solve", [cons, cert], sense=model.sense, status=sol.status,
                          variables=model.n_vars, rows=len(model.rows),
                          dropped_rows=len(model.dropped))
    if sol.status == "optimal":
        pots = dual_potentials(sol, model)
        payload["objective"] = sol.objective
        payload["atoms"] = [[list(idx), w] for idx, w in sol.atoms(model)]
        payload["dual_potentials"] = {
            "".join(map(str, I)): _nested(t, [model.sizes[i] for i in I]) for I, t in pots.items()}
        payload["dual_potentials_normalization"] = "all but the last table have zero mean"
        payload["dual_objective"] = dual_objective(pots, spec)
    elif sol.status == "infeasible":
        payload["farkas"] = sol.farkas
    return _finish(payload, args)


def cmd_lp_feasibility(args) -> int:
    if not args.inp:
        raise UsageError("--in is required")
    spec, model = _load_problem(args.inp)
    cons = consistency_check(spec)
    cons.asserted = False
    zero = build_model(spec, lambda *idx: 0)
    sol = solve(zero)
    payload = _run_report("lp feasibility", [cons], feasible=sol.status == "optimal",
                          consistent=not cons.violations, certified=sol.certified)
    if sol.status == "optimal":
        payload["witness"] = [[list(idx), w] for idx, w in sol.atoms(zero)]
    else:
        payload["farkas"] = sol.farkas
    return _finish(payload, args)


# examples -----------------------------------------------------------------

def cmd_examples_epsilon(args) -> int:
    eps = to_rational(args.eps or "1/128")
    rep = ex.epsilon_example(eps, solve_lp=not args.no_lp)
    return _finish(_run_report("examples epsilon", [rep], eps=eps), args)


def cmd_examples_baby_cube(args) -> int:
    return _finish(_run_report("examples baby-cube", [ex.baby_cube("min"), ex.baby_cube("max")]), args)


def cmd_examples_four_point(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required for randomized commands")
    trials = 100 if args.trials is None else args.trials
    rep = ex.four_point_theorem_check(trials, args.seed)
    return _finish(_run_report("examples four-point", [rep], trials=trials, seed=args.seed), args)


def cmd_examples_infeasible(args) -> int:
    return _finish(_run_report("examples infeasible-marginals", [ex.infeasible_marginals_check(4)]), args)


def cmd_examples_xor(args) -> int:
    n = _level(args, 3)
    reps = [ex.xor_optimality_check(n, s) for s in ("min", "max")]
    return _finish(_run_report("examples xor-optimality", reps, level=n), args)


# fractal / monotone ---------------------------------------------------------

def cmd_fractal_export(args) -> int:
    n = _level(args, 12)
    what = args.what.replace("-", "_")
    fmt = args.format or "csv"
    if what not in WHAT or fmt not in FORMATS:
        raise UsageError(f"--what must be one of {WHAT}, --format one of {FORMATS}")
    if not args.out:
        raise UsageError("--out is required")
    export_fractal(n, what, fmt, args.out)
    return EXIT_OK


def _read_points(path: str) -> PointSet3:
    try:
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                cells = [c.strip() for c in row if c.strip()]
                if not cells or cells[0].startswith("#"):
                    continue
                if cells == ["x", "y", "z"]:
                    continue
                rows.append(cells)
        return PointSet3(rows)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read points {path}: {exc}") from exc


def cmd_monotone_check(args) -> int:
    path = args.points or args.inp
    if not path:
        raise UsageError("--points (or --in) is required")
    g = _read_points(path)
    value, witness = competitor_optimum(g, args.sense)
    own = plan_cost(g.uniform_measure())
    better = value > own if args.sense == "max" else value < own
    payload = {
        "command": "monotone check",
        "sense": args.sense,
        "points": [list(p) for p in g],
        "cost": own,
        "competitor_optimum": value,
        "monotone": not better,
        "passed": True,
    }
    if better:
        pts = support_points(witness)
        payload["witness"] = [[list(p), w] for p, (_, w) in zip(pts, sorted(witness.weights.items()))]
    return _finish(payload, args)


# sweeps -------------------------------------------------------------------

def cmd_verify_all(args) -> int:
    n = _level(args, 8)
    table = _table(args)
    reps = _potential_reports(n, table) + verify_integral(n)
    return _finish(_run_report("verify-all", reps, level=n), args)


def cmd_report_duality(args) -> int:
    n = _level(args, 12)
    J, K = xor_integral_means()
    f_mean = 8 * J - 4 * K
    # continuous targets: the dual value and the exact cost of the max plan
    target_min = Fraction(3, 8) * f_mean
    target_max = plan_cost(xor_plan(1, "max"), "exact_cell")
    rep = Report(f"duality.refinement[n<={n}]")
    levels = []
    prev = None
    for k in range(1, n + 1):
        cmin = xor_left_cost(k, "min")
        cmax = xor_left_cost(k, "max")
        dual = Fraction(3, 8) * grid_integral(k)
        gaps = (target_min - cmin, target_max - cmax, target_min - dual)
        tol = Fraction(2, 2 ** k)
        rep.checked += 1
        if any(abs(g) > tol for g in gaps):
            rep.fail(check="gap <= 2^(1-n)", level=k, gaps=list(gaps))
        if prev is not None and any(abs(g) >= abs(p) for g, p in zip(gaps, prev)):
            rep.fail(check="gaps shrink", level=k)
        prev = gaps
        levels.append({"level": k, "xor_min_cost": cmin, "xor_max_cost": cmax,
                       "dual_riemann_objective": dual, "gap_min": gaps[0],
                       "gap_max": gaps[1], "gap_dual": gaps[2]})
    reps = [rep]
    lp: dict[str, Any] = {}
    if n <= DUALITY_LP_MAX_LEVEL:
        for sense in ("min", "max"):
            r = ex.xor_optimality_check(n, sense)
            reps.append(r)
            lp[sense] = {"primal": r.values["lp_optimum"], "xor_cost": r.values["xor_cost"]}
    payload = _run_report("report-duality", reps, level=n,
                          targets={"min": target_min, "max": target_max,
                                   "potential_mean": f_mean},
                          refinement=levels, lp=lp or None)
    return _finish(payload, args)


# parser -------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--level", type=int)
    p.add_argument("--out")
    p.add_argument("--format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nimtransport",
                                     description="Exact Nim-sum transport tools.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="group", required=True)

    pot = sub.add_parser("potential").add_subparsers(dest="cmd", required=True)
    p = pot.add_parser("eval", help="f(a, b) for integers, f_C for dyadics")
    p.add_argument("a")
    p.add_argument("b")
    _common(p)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_potential_eval)
    p = pot.add_parser("verify")
    _common(p)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_potential_verify)

    integ = sub.add_parser("integral").add_subparsers(dest="cmd", required=True)
    p = integ.add_parser("eval")
    p.add_argument("a")
    p.add_argument("b")
    _common(p)
    p.set_defaults(func=cmd_integral_eval)
    p = integ.add_parser("verify")
    _common(p)
    p.set_defaults(func=cmd_integral_verify)

    lp = sub.add_parser("lp").add_subparsers(dest="cmd", required=True)
    for name, fn in (("solve", cmd_lp_solve), ("feasibility", cmd_lp_feasibility)):
        p = lp.add_parser(name)
        p.add_argument("--in", dest="inp")
        _common(p)
        p.set_defaults(func=fn)

    exs = sub.add_parser("examples").add_subparsers(dest="cmd", required=True)
    p = exs.add_parser("epsilon")
    p.add_argument("--eps")
    p.add_argument("--no-lp", action="store_true", help="skip the 512-variable LP")
    _common(p)
    p.set_defaults(func=cmd_examples_epsilon)
    p = exs.add_parser("baby-cube")
    _common(p)
    p.set_defaults(func=cmd_examples_baby_cube)
    p = exs.add_parser("four-point")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    _common(p)
    p.set_defaults(func=cmd_examples_four_point)
    p = exs.add_parser("infeasible-marginals")
    _common(p)
    p.set_defaults(func=cmd_examples_infeasible)
    p = exs.add_parser("xor-optimality")
    _common(p)
    p.set_defaults(func=cmd_examples_xor)

    fr = sub.add_parser("fractal").add_subparsers(dest="cmd", required=True)
    p = fr.add_parser("export")
    p.add_argument("--what", default="tetrahedron-min")
    _common(p)
    p.set_defaults(func=cmd_fractal_export)

    mono = sub.add_parser("monotone").add_subparsers(dest="cmd", required=True)
    p = mono.add_parser("check")
    p.add_argument("--points")
    p.add_argument("--in", dest="inp")
    p.add_argument("--sense", choices=("max", "min"), default="max")
    _common(p)
    p.set_defaults(func=cmd_monotone_check)

    for name in ("verify-all", "report-duality"):
        p = sub.add_parser(name)
        _common(p)
        if name == "verify-all":
            p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
        p.set_defaults(func=cmd_verify_all if name == "verify-all" else cmd_report_duality)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    fmt = getattr(args, "format", None)
    if args.group in ("potential", "integral") and args.cmd == "eval":
        if fmt not in (None, "json", "text"):
            print("error: --format must be json or text", file=sys.stderr)
            return EXIT_USAGE
        args.format = fmt or "text"
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (UsageError, ValueError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start
    # timing goes to stderr so reports stay byte-identical across runs
    print(f"[{args.group}] {elapsed:.2f}s backend={kernels.BACKEND}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
