from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satnc import (
    AssignmentContradiction,
    CapacityPreset,
    ClauseUnsatisfied,
    Formula,
    RouteAssignment,
    RoutePlan,
    all_assignments,
    assignment_to_path,
    audit,
    brute_sat,
    check_feasible,
    classify_path,
    compile_formula,
    conflict_pairs,
    eval_formula,
    max_sat_brute,
    neighbors,
    path_to_assignment,
    preload_plan,
    random_formula,
    traversable_clauses,
)
from conftest import A1, A2, BROKEN_PATH_RAW
from oracles import subset_sizes


def paper_names(inst, path):
    return [inst.paper_name(v) or v for v in path]


def segments(inst, path):
    """Split a main path into per-clause entry..exit runs."""
    out = []
    for i in range(1, inst.clause_count + 1):
        start = path.index(f"E{i}")
        end = path.index(f"X{i}")
        out.append(path[start : end + 1])
    return out


class TestCompileCounts:
    def test_worked_example(self, worked_instance):
        counts = worked_instance.subset_counts()
        assert counts == {"V1": 6, "V2": 12, "V3": 24, "V4": 3, "V5": 6, "aux": 4}

    def test_single_clause(self):
        inst = compile_formula(Formula.from_clauses(2, [(1, -2)]))
        counts = inst.subset_counts()
        assert counts == {"V1": 2, "V2": 2, "V3": 4, "V4": 1, "aux": 2}

    def test_contradiction_pair_conflict_count(self):
        f = Formula.from_clauses(1, [(1,), (-1,)])
        inst = compile_formula(f)
        assert inst.subset_counts()["V5"] == 1

    def test_empty_formula_rejected(self):
        with pytest.raises(ValueError):
            compile_formula(Formula.from_clauses(2, []))

    def test_deterministic(self, worked_formula):
        assert compile_formula(worked_formula) == compile_formula(worked_formula)

    def test_capacities(self, worked_instance):
        net = worked_instance.network
        for info in worked_instance.node_table:
            expected = {"V1": 3, "V2": 5, "V3": 3, "V4": 3, "V5": 1}.get(info.subset)
            if expected is not None:
                assert net.capacity_of(info.id) == expected
        assert net.capacity_of("A1") == 1
        assert net.capacity_of("T") == 2

    def test_flow_layout(self, worked_instance):
        flows = worked_instance.flows
        assert [f.label for f in flows] == [
            "preload-1", "preload-2", "preload-3", "main",
        ]
        for i, flow in enumerate(flows[:-1], 1):
            assert (flow.src, flow.dst, flow.copies) == (f"A{i}", f"B{i}", 1)
        main = flows[-1]
        assert (main.src, main.dst, main.copies) == ("E1", "T", None)


class TestDegreeFacts:
    def test_conflict_degree_two(self, worked_instance):
        for pair in worked_instance.conflicts:
            assert len(neighbors(worked_instance.network, f"K{pair.index}")) == 2

    def test_bypass_degree_three(self, worked_instance):
        for i in (1, 2, 3):
            assert neighbors(worked_instance.network, f"B{i}") == {
                f"E{i}",
                f"X{i}",
                f"A{i}",
            }

    def test_literal_clique(self, worked_instance):
        net = worked_instance.network
        for i, clause in enumerate(worked_instance.formula.clauses, 1):
            lits = [f"L{i}.{j}" for j in range(1, len(clause) + 1)]
            for a, b in itertools.combinations(lits, 2):
                assert net.has_edge(a, b)


class TestAssignmentToPath:
    def test_true_literal_segments(self, worked_instance):
        path = assignment_to_path(worked_instance, A1)
        seg1, seg2, seg3 = segments(worked_instance, path)
        assert paper_names(worked_instance, seg1) == [
            "n_1^1", "n_5^1", "n_6^1", "n_9^1", "n_12^1", "n_13^1", "n_4^1",
        ]
        assert paper_names(worked_instance, seg2) == [
            "n_1^2", "n_8^2", "n_9^2", "n_10^2", "n_4^2",
        ]
        # canonical clause-3 run: only the fourth literal is true
        assert paper_names(worked_instance, seg3) == [
            "n_1^3", "n_14^3", "n_15^3", "n_16^3", "n_4^3",
        ]
        assert path[-1] == "T"

    def test_wrong_assignment_fails_at_clause_3(self, worked_instance):
        with pytest.raises(ClauseUnsatisfied) as exc:
            assignment_to_path(worked_instance, A2)
        assert exc.value.clause == 3

    def test_feasible_with_preloads(self, worked_instance):
        path = assignment_to_path(worked_instance, A1)
        plan = RoutePlan(
            preload_plan(worked_instance).assignments
            + (RouteAssignment(worked_instance.flows[-1], 0, path),)
        )
        verdict = check_feasible(worked_instance.network, plan)
        assert verdict.ok


class TestPathToAssignment:
    def test_inverts_canonical_path(self, worked_instance):
        path = assignment_to_path(worked_instance, A1)
        partial = path_to_assignment(worked_instance, path)
        assert partial == {1: True, 2: True, 3: True, 4: False}

    def test_contradictory_visits(self, worked_instance):
        # L1.1 carries variable 1 positive, L2.1 carries it negated.
        with pytest.raises(AssignmentContradiction) as exc:
            path_to_assignment(worked_instance, ("L1.1", "L2.1"))
        assert exc.value.var == 1

    def test_pure_bypass_route_empty(self, worked_instance):
        route = ("E1", "B1", "X1", "E2", "B2", "X2", "E3", "B3", "X3", "T")
        assert path_to_assignment(worked_instance, route) == {}


class TestAudit:
    def test_worked_example_ok(self, worked_instance):
        report = audit(worked_instance)
        assert report.ok
        assert all(r.bypass_blocked for r in report.clauses)
        assert all(
            margin >= 0 for r in report.clauses for margin in r.margins.values()
        )

    def test_raised_bypass_capacity_not_blocked(self, worked_formula):
        report = audit(compile_formula(worked_formula, CapacityPreset(bypass=5)))
        assert not report.ok
        for i in (1, 2, 3):
            assert f"clause {i}: bypass not blocked" in report.failures

    def test_raised_conflict_capacity_not_blocked(self, worked_formula):
        report = audit(compile_formula(worked_formula, CapacityPreset(conflict=2)))
        assert not report.ok
        assert any("conflict not blocked" in f for f in report.failures)
        assert any("through-route not blocked" in f for f in report.failures)

    def test_squeezed_literal_capacity_overloads_intended_path(self, worked_formula):
        report = audit(compile_formula(worked_formula, CapacityPreset(literal=3)))
        assert any("intended segment overloads" in f for f in report.failures)


class TestTraversableClauses:
    def test_all_satisfied(self, worked_instance):
        assert traversable_clauses(worked_instance, A1) == 3

    def test_one_clause_falsified(self, worked_instance):
        assert traversable_clauses(worked_instance, A2) == 2

    def test_single_clause_falsified(self):
        inst = compile_formula(Formula.from_clauses(2, [(1, 2)]))
        assert traversable_clauses(inst, {1: False, 2: False}) == 0


class TestClassifyPath:
    def test_broken_route_malformed(self, worked_instance):
        raw = BROKEN_PATH_RAW.split()
        path = tuple(worked_instance.resolve_node(name) for name in raw)
        result = classify_path(worked_instance, path)
        assert result.kind == "malformed"
        assert result.bad_hop == ("X2", "P3.2")

    def test_canonical_path_feasible(self, worked_instance):
        path = assignment_to_path(worked_instance, A1)
        assert classify_path(worked_instance, path).kind == "feasible"

    def test_bypass_route_overloaded(self, worked_instance):
        route = (
            "E1", "B1", "X1", "E2", "B2", "X2", "E3", "B3", "X3", "T",
        )
        result = classify_path(worked_instance, route)
        assert result.kind == "overloaded"
        assert any(o.node == "B1" for o in result.overloads)


# --- properties ---------------------------------------------------------

small_formulas = st.builds(
    random_formula,
    st.integers(2, 4),
    st.integers(1, 4),
    st.just(2),
    st.integers(0, 100_000),
) | st.builds(
    random_formula,
    st.integers(3, 4),
    st.integers(1, 3),
    st.just(3),
    st.integers(0, 100_000),
)


@given(small_formulas)
@settings(max_examples=150, deadline=None)
def test_subset_sizes_match_counting_oracle(f):
    inst = compile_formula(f)
    counts = inst.subset_counts()
    expected = subset_sizes(f.clauses, f.var_count)
    for subset, size in expected.items():
        assert counts.get(subset, 0) == size
    assert counts["aux"] == len(f.clauses) + 1


@given(small_formulas)
@settings(max_examples=75, deadline=None)
def test_soundness_and_completeness_exhaustive(f):
    inst = compile_formula(f)
    m = len(f.clauses)
    for a in all_assignments(f.var_count):
        if eval_formula(f, a) == m:
            path = assignment_to_path(inst, a)
            plan = RoutePlan(
                preload_plan(inst).assignments
                + (RouteAssignment(inst.flows[-1], 0, path),)
            )
            assert check_feasible(inst.network, plan).ok
        else:
            with pytest.raises(ClauseUnsatisfied):
                assignment_to_path(inst, a)


@given(small_formulas)
@settings(max_examples=75, deadline=None)
def test_inversion_consistent(f):
    inst = compile_formula(f)
    witness = brute_sat(f)
    if witness is None:
        return
    path = assignment_to_path(inst, witness)
    partial = path_to_assignment(inst, path)
    for var, value in partial.items():
        assert witness[var] == value


@given(small_formulas)
@settings(max_examples=50, deadline=None)
def test_max_correspondence_small_scale(f):
    inst = compile_formula(f)
    best = max(
        traversable_clauses(inst, a) for a in all_assignments(f.var_count)
    )
    assert best == max_sat_brute(f)[0]


@given(small_formulas)
@settings(max_examples=50, deadline=None)
def test_conflict_pairs_are_cross_clause_complementary(f):
    for pair in conflict_pairs(f):
        ci, cj = pair.pos[0], pair.neg[0]
        assert ci != cj
        lit_pos = f.clauses[ci - 1][pair.pos[1] - 1]
        lit_neg = f.clauses[cj - 1][pair.neg[1] - 1]
        assert lit_pos > 0 and lit_neg < 0 and lit_pos == -lit_neg


def test_equivalence_exhaustive_over_tiny_clause_alphabet():
    """Every 1- and 2-clause formula over 2 variables with clause width <= 2,
    duplicate literals and tautological clauses included: the admission
    optimum must be m+1 exactly for the satisfiable ones, the best
    traversable-clause count must equal the MAX-SAT optimum, and the audit
    must hold."""
    from satnc import solve_exact

    lits = [1, -1, 2, -2]
    alphabet = [(l,) for l in lits] + [(a, b) for a in lits for b in lits]
    for m in (1, 2):
        for combo in itertools.product(alphabet, repeat=m):
            f = Formula.from_clauses(2, combo)
            inst = compile_formula(f)
            result = solve_exact(inst)
            expected = m + (1 if brute_sat(f) is not None else 0)
            assert result.optimal and result.accepted_count == expected, combo
            best = max(
                traversable_clauses(inst, a) for a in all_assignments(2)
            )
            assert best == max_sat_brute(f)[0], combo
            assert audit(inst).ok, combo
