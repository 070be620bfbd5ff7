"""Command-line surface: compile, check, solve, verify, bound.

Exit codes are a stable contract: 0 success/agreement, 1 verification or
audit failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path as FsPath

from .cnf import EXHAUSTIVE_BOUND, lint_formula, parse_dimacs
from .gadget import (
    CapacityPreset,
    ClauseUnsatisfied,
    NcInstance,
    assignment_to_path,
    classify_path,
    compile_formula,
    preload_plan,
    true_positions,
)
from .harness import run_verification
from .instance_io import load_instance, save_instance, to_dot
from .model import RouteAssignment, RoutePlan, check_feasible, plan_load
from .solver import DEFAULT_NODE_BUDGET, inapprox_bound, solve_exact, solve_greedy

_CAP_FIELDS = {
    "v1v3": "entry_exit",
    "v2": "literal",
    "v4": "bypass",
    "v5": "conflict",
    "src": "preload_src",
    "terminal": "terminal",
}


def _parse_caps(text: str | None) -> CapacityPreset:
    if not text:
        return CapacityPreset()
    overrides = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip().lower()
        if key not in _CAP_FIELDS or not value.strip().lstrip("-").isdigit():
            raise ValueError(f"bad capacity override {item!r}")
        overrides[_CAP_FIELDS[key]] = int(value)
    return CapacityPreset(**{**CapacityPreset().__dict__, **overrides})


def _parse_literals(text: str) -> dict[int, bool]:
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    values: dict[int, bool] = {}
    for tok in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise ValueError(f"bad literal {tok!r}") from None
        if lit == 0:
            raise ValueError("literal 0 is not allowed")
        var = abs(lit)
        if var in values and values[var] != (lit > 0):
            raise ValueError(f"contradictory literals for variable {var}")
        values[var] = lit > 0
    return values


def _parse_node_list(inst: NcInstance, text: str) -> tuple[str, ...]:
    names = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    return tuple(inst.resolve_node(name) for name in names)


def _print_loads(inst: NcInstance, plan: RoutePlan) -> None:
    loads = plan_load(inst.network, plan)
    print("loads:")
    for v in sorted(inst.network.nodes):
        print(f"  {v} {loads[v]}/{inst.network.capacity_of(v)}")


def cmd_compile(args: argparse.Namespace) -> int:
    text = FsPath(args.cnf).read_text(encoding="utf-8")
    formula = parse_dimacs(text)
    for warning in lint_formula(formula):
        print(f"warning: {warning}", file=sys.stderr)
    inst = compile_formula(formula, _parse_caps(args.caps))
    save_instance(inst, args.out)
    if args.dot:
        FsPath(args.dot).write_text(to_dot(inst), encoding="utf-8")
    counts = inst.subset_counts()
    summary = ", ".join(f"{k}={counts[k]}" for k in sorted(counts))
    print(
        f"wrote {args.out}: {len(inst.network.nodes)} nodes "
        f"({summary}), {len(inst.network.edges())} edges, {len(inst.flows)} flows"
    )
    return 0


def _check_assignment(inst: NcInstance, raw: str, as_json: bool) -> int:
    assignment = _parse_literals(raw)
    formula = inst.formula
    if formula is None:
        raise ValueError("instance carries no formula; use --path")
    per_clause = []
    failed = None
    for i, clause in enumerate(formula.clauses, 1):
        try:
            trues = true_positions(clause, assignment)
        except KeyError as exc:
            raise ValueError(f"assignment missing variable {exc.args[0]}") from None
        per_clause.append((i, trues))
        if not trues and failed is None:
            failed = i
    if failed is not None:
        if as_json:
            print(json.dumps({"verdict": "unsatisfied", "clause": failed}))
        else:
            for i, trues in per_clause:
                state = f"true at positions {list(trues)}" if trues else "UNSATISFIED"
                print(f"clause {i}: {state}")
            print(f"verdict: failure at clause {failed}")
        return 1
    path = assignment_to_path(inst, assignment)
    plan = RoutePlan(
        preload_plan(inst).assignments
        + (RouteAssignment(inst.flows[-1], 0, path),)
    )
    verdict = check_feasible(inst.network, plan)
    overloads = [(o.node, o.load, o.capacity) for o in verdict.overloads]
    if as_json:
        print(
            json.dumps(
                {
                    "verdict": "feasible" if verdict.ok else "overloaded",
                    "path": [inst.paper_name(v) or v for v in path],
                    "overloads": overloads,
                }
            )
        )
    else:
        for i, trues in per_clause:
            print(f"clause {i}: true at positions {list(trues)}")
        print("path:", " ".join(inst.paper_name(v) or v for v in path))
        if verdict.ok:
            print("verdict: feasible (0 overloads)")
        else:
            for node, load, cap in overloads:
                print(f"overload: {node} load {load} > capacity {cap}")
            print("verdict: overloaded")
    return 0 if verdict.ok else 1


def _check_path(inst: NcInstance, raw: str, as_json: bool) -> int:
    path = _parse_node_list(inst, raw)
    result = classify_path(inst, path)
    if as_json:
        payload: dict = {"verdict": result.kind}
        if result.bad_hop:
            payload["bad_hop"] = list(result.bad_hop)
        if result.reason:
            payload["reason"] = result.reason
        if result.overloads:
            payload["overloads"] = [
                (o.node, o.load, o.capacity) for o in result.overloads
            ]
        print(json.dumps(payload))
    else:
        if result.kind == "malformed":
            detail = result.reason
            if result.bad_hop:
                u, x = result.bad_hop
                detail = (
                    f"hop {inst.paper_name(u) or u} -> {inst.paper_name(x) or x} "
                    "is not an edge"
                )
            print(f"verdict: malformed ({detail})")
        elif result.kind == "overloaded":
            for o in result.overloads:
                print(f"overload: {o.node} load {o.load} > capacity {o.capacity}")
            print("verdict: overloaded")
        else:
            print("verdict: feasible")
    return 0 if result.kind == "feasible" else 1


def cmd_check(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if args.assignment is not None:
        return _check_assignment(inst, args.assignment, args.json)
    return _check_path(inst, args.path, args.json)


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if args.mode == "exact":
        result = solve_exact(inst, budget=args.budget)
    else:
        result = solve_greedy(inst)
    if args.json:
        print(
            json.dumps(
                {
                    "accepted": result.accepted_count,
                    "optimal": result.optimal,
                    "nodes_explored": result.nodes_explored,
                    "budget_hit": result.wall_budget_hit,
                    "warnings": list(result.warnings),
                    "plan": [
                        {
                            "flow": a.flow.label,
                            "copy": a.copy,
                            "path": list(a.path),
                        }
                        for a in result.plan.assignments
                    ],
                }
            )
        )
        return 0
    flag = "optimal" if result.optimal else "not proven optimal"
    print(f"accepted: {result.accepted_count} ({flag})")
    for warning in result.warnings:
        print(f"warning: {warning}")
    for a in result.plan.assignments:
        print(f"flow {a.flow.label} copy {a.copy + 1}: {' '.join(a.path)}")
    _print_loads(inst, result.plan)
    if args.mode == "exact":
        print(f"nodes explored: {result.nodes_explored}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.vars > EXHAUSTIVE_BOUND:
        raise ValueError(
            f"--vars exceeds the exhaustive bound of {EXHAUSTIVE_BOUND}"
        )
    if args.vars < args.k:
        raise ValueError("--vars must be at least --k")
    report = run_verification(
        args.vars,
        args.clauses,
        args.k,
        args.trials,
        args.seed,
        caps=_parse_caps(args.caps),
    )
    if args.json:
        payload = {
            "trials": report.trials,
            "agreed": report.agreed,
            "audits_passed": report.audits_passed,
            "max_matches": report.max_matches,
            "ok": report.all_ok,
            "records": [
                {
                    "trial": r.index,
                    "seed": r.seed,
                    "satisfiable": r.satisfiable,
                    "nc_accepted": r.nc_accepted,
                    "expected_accepted": r.expected_accepted,
                    "solver_optimal": r.solver_optimal,
                    "audit_ok": r.audit_ok,
                    "agree": r.agree,
                    "max_sat": r.max_sat,
                    "max_traversable": r.max_traversable,
                }
                for r in report.records
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for r in report.records:
            nc = str(r.nc_accepted) if r.solver_optimal else f"{r.nc_accepted}?"
            print(
                f"trial {r.index:03d}: seed={r.seed} n={r.var_count} "
                f"m={r.clause_count} k={r.k} "
                f"sat={'yes' if r.satisfiable else 'no'} "
                f"nc={nc} expected={r.expected_accepted} "
                f"audit={'ok' if r.audit_ok else 'FAIL'} "
                f"agree={'yes' if r.agree else 'NO'} "
                f"max={r.max_traversable}/{r.max_sat}"
            )
        print(
            f"summary: trials={report.trials} agreed={report.agreed} "
            f"audits_passed={report.audits_passed} max_matches={report.max_matches}"
        )
        print(f"verdict: {'OK' if report.all_ok else 'FAIL'}")
    if not report.all_ok:
        out_dir = FsPath(args.witness_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for r in report.records:
            if r.witness is not None:
                target = out_dir / f"witness-trial-{r.index:03d}.json"
                target.write_text(
                    json.dumps(r.witness, indent=2) + "\n", encoding="utf-8"
                )
                print(f"witness written: {target}", file=sys.stderr)
    return report.exit_status


def cmd_bound(args: argparse.Namespace) -> int:
    value = inapprox_bound(args.k)
    decimal = f"{float(value):.6f}"
    if args.json:
        print(
            json.dumps(
                {
                    "k": args.k,
                    "numerator": value.numerator,
                    "denominator": value.denominator,
                    "decimal": decimal,
                }
            )
        )
    else:
        print(f"{value.numerator}/{value.denominator} ≈ {decimal}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satnc",
        description=(
            "Compile CNF formulas into interference-limited flow-admission "
            "instances, solve them, and verify the correspondence."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a DIMACS CNF file into an instance")
    p.add_argument("--cnf", required=True, help="input DIMACS CNF file")
    p.add_argument("--out", required=True, help="output instance JSON file")
    p.add_argument("--dot", help="also write a DOT drawing")
    p.add_argument("--caps", help="capacity overrides, e.g. v4=5,v5=2")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("check", help="check an assignment or a raw path")
    p.add_argument("--instance", required=True, help="instance JSON file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--assignment", help="signed literals, e.g. \"1 2 3 -4 -5 -6\""
    )
    group.add_argument(
        "--path", help="comma-separated node names (canonical or raw indices)"
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="run a solver on an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="random-trial equivalence harness")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--caps", help="capacity overrides, e.g. v4=5")
    p.add_argument("--witness-dir", default=".", help="where to write witnesses")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="print the hardness constant for width k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ClauseUnsatisfied as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
