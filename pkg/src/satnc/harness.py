"""End-to-end verification: random formulas, dual oracles, agreement records.

For each trial a random formula is compiled; the satisfiability side is
settled by the exhaustive SAT oracle and the network side by the exact
admission solver.  The two agree when the admission optimum is m+1 on
satisfiable formulas (all m preloads plus the main flow) and exactly m
otherwise.  The per-trial record also carries the clause-count
correspondence: the best assignment's traversable-clause count must match
the MAX-SAT optimum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cnf import all_assignments, brute_sat, max_sat_brute, random_formula
from .gadget import CapacityPreset, audit, compile_formula, traversable_clauses
from .instance_io import instance_to_dict
from .solver import DEFAULT_NODE_BUDGET, solve_exact


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    var_count: int
    clause_count: int
    k: int
    satisfiable: bool
    nc_accepted: int
    expected_accepted: int
    solver_optimal: bool
    audit_ok: bool
    agree: bool
    max_sat: int
    max_traversable: int
    max_match: bool
    witness: dict | None = None


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    records: tuple[TrialRecord, ...]

    @property
    def agreed(self) -> int:
        return sum(1 for r in self.records if r.agree)

    @property
    def audits_passed(self) -> int:
        return sum(1 for r in self.records if r.audit_ok)

    @property
    def max_matches(self) -> int:
        return sum(1 for r in self.records if r.max_match)

    @property
    def all_ok(self) -> bool:
        return all(r.agree and r.audit_ok for r in self.records)

    @property
    def exit_status(self) -> int:
        return 0 if self.all_ok else 1


def run_verification(
    var_count: int,
    clause_count: int,
    k: int,
    trials: int,
    seed: int,
    caps: CapacityPreset = CapacityPreset(),
    solver_budget: int = DEFAULT_NODE_BUDGET,
) -> VerificationReport:
    """Run seeded trials; deterministic byte-for-byte for a fixed seed."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    if clause_count < 1 and trials > 0:
        raise ValueError("need at least one clause per trial")
    rng = random.Random(seed)
    trial_seeds = [rng.randrange(2**32) for _ in range(trials)]
    records: list[TrialRecord] = []
    for index, trial_seed in enumerate(trial_seeds):
        formula = random_formula(var_count, clause_count, k, trial_seed)
        inst = compile_formula(formula, caps)
        report = audit(inst)
        witness_assignment = brute_sat(formula)
        satisfiable = witness_assignment is not None
        result = solve_exact(inst, budget=solver_budget)
        expected = clause_count + 1 if satisfiable else clause_count
        # An uncertified optimum cannot witness agreement; it counts as a
        # failure and the record says why via solver_optimal.
        agree = result.optimal and result.accepted_count == expected
        max_sat, _ = max_sat_brute(formula)
        max_traversable = max(
            traversable_clauses(inst, a) for a in all_assignments(var_count)
        )
        witness = None
        if not agree or not report.ok:
            witness = {
                "trial": index,
                "seed": trial_seed,
                "satisfiable": satisfiable,
                "nc_accepted": result.accepted_count,
                "expected_accepted": expected,
                "solver_optimal": result.optimal,
                "audit_failures": list(report.failures),
                "instance": instance_to_dict(inst),
            }
        records.append(
            TrialRecord(
                index=index,
                seed=trial_seed,
                var_count=var_count,
                clause_count=clause_count,
                k=k,
                satisfiable=satisfiable,
                nc_accepted=result.accepted_count,
                expected_accepted=expected,
                solver_optimal=result.optimal,
                audit_ok=report.ok,
                agree=agree,
                max_sat=max_sat,
                max_traversable=max_traversable,
                max_match=max_sat == max_traversable,
                witness=witness,
            )
        )
    return VerificationReport(trials, tuple(records))
