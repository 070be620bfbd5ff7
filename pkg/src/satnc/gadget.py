"""Clause-gadget compiler: formulas to flow-admission instances and back.

Each clause becomes a gadget chained between an entry and an exit node:
one pre/lit/post chain per literal, a clique over the literal nodes, and a
capacity-limited bypass that a dedicated preload flow keeps saturated.
Complementary literal occurrences in different clauses share a capacity-1
conflict node, so no feasible route can use both.  A single main flow from
the first entry to a terminal node is then admissible exactly when every
clause can be crossed through one of its true literals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .cnf import Assignment, Formula, _require_total
from .model import (
    FlowRequest,
    Hop,
    Network,
    Overload,
    Path,
    RouteAssignment,
    RoutePlan,
    hops_load,
    is_elementary,
)

TERMINAL = "T"


def entry_id(i: int) -> str:
    return f"E{i}"


def exit_id(i: int) -> str:
    return f"X{i}"


def prelit_id(i: int, j: int) -> str:
    return f"P{i}.{j}"


def lit_id(i: int, j: int) -> str:
    return f"L{i}.{j}"


def postlit_id(i: int, j: int) -> str:
    return f"Q{i}.{j}"


def bypass_id(i: int) -> str:
    return f"B{i}"


def preload_src_id(i: int) -> str:
    return f"A{i}"


def conflict_id(p: int) -> str:
    return f"K{p}"


@dataclass(frozen=True)
class CapacityPreset:
    """Per-role node capacities; the defaults make the reduction sound."""

    entry_exit: int = 3  # entry/exit nodes and the pre/post literal chain
    literal: int = 5
    bypass: int = 3
    conflict: int = 1
    preload_src: int = 1
    terminal: int = 2


@dataclass(frozen=True)
class NodeInfo:
    id: str
    paper_index: str | None
    subset: str  # "V1".."V5" or "aux"
    capacity: int


@dataclass(frozen=True)
class ConflictPair:
    """A (positive, negated) occurrence pair of one variable, across clauses."""

    index: int  # 1-based
    pos: tuple[int, int]  # (clause, position) of the positive occurrence
    neg: tuple[int, int]


class ClauseUnsatisfied(Exception):
    """Raised when an assignment leaves a clause with no true literal."""

    def __init__(self, clause: int):
        super().__init__(f"clause {clause} has no true literal")
        self.clause = clause


class AssignmentContradiction(ValueError):
    """A path visits complementary literal occurrences of one variable."""

    def __init__(self, var: int):
        super().__init__(f"path requires variable {var} to be both true and false")
        self.var = var


@dataclass(frozen=True, eq=False)
class NcInstance:
    """A capacity network plus its ordered flow demands.

    Compiled instances keep the source formula and a canonical-id table
    that maps every node back to its raw construction index.
    """

    network: Network
    flows: tuple[FlowRequest, ...]
    node_table: tuple[NodeInfo, ...]
    formula: Formula | None = None
    conflicts: tuple[ConflictPair, ...] = ()

    def __post_init__(self) -> None:
        ids = tuple(info.id for info in self.node_table)
        if ids != self.network.nodes:
            raise ValueError("node table does not match the network's node set")
        for info in self.node_table:
            if info.capacity != self.network.capacity_of(info.id):
                raise ValueError(f"capacity mismatch for node {info.id!r}")
        for flow in self.flows:
            if not self.network.has_node(flow.src) or not self.network.has_node(
                flow.dst
            ):
                raise ValueError(f"flow {flow.label!r} references unknown nodes")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NcInstance):
            return NotImplemented
        return (
            self.network == other.network
            and self.flows == other.flows
            and self.node_table == other.node_table
            and self.formula == other.formula
            and self.conflicts == other.conflicts
        )

    @cached_property
    def info(self) -> Mapping[str, NodeInfo]:
        return {n.id: n for n in self.node_table}

    @cached_property
    def paper_to_id(self) -> Mapping[str, str]:
        return {n.paper_index: n.id for n in self.node_table if n.paper_index}

    def paper_name(self, node_id: str) -> str | None:
        return self.info[node_id].paper_index

    def resolve_node(self, name: str) -> str:
        """Accept a canonical id or a raw construction index like ``n_17^1``."""
        if name in self.info:
            return name
        if name in self.paper_to_id:
            return self.paper_to_id[name]
        raise ValueError(f"unknown node name {name!r}")

    def subset_of(self, node_id: str) -> str:
        return self.info[node_id].subset

    def subset_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for info in self.node_table:
            counts[info.subset] = counts.get(info.subset, 0) + 1
        return counts

    @property
    def clause_count(self) -> int:
        if self.formula is None:
            raise ValueError("instance was not compiled from a formula")
        return len(self.formula.clauses)


def plain_instance(network: Network, flows: Iterable[FlowRequest]) -> NcInstance:
    """Wrap a hand-built network as an instance with no gadget metadata."""
    table = tuple(
        NodeInfo(v, None, "aux", network.capacity_of(v)) for v in network.nodes
    )
    return NcInstance(network, tuple(flows), table)


def conflict_pairs(formula: Formula) -> tuple[ConflictPair, ...]:
    """All cross-clause complementary occurrence pairs, variable-major order."""
    pos: dict[int, list[tuple[int, int]]] = {}
    neg: dict[int, list[tuple[int, int]]] = {}
    for i, clause in enumerate(formula.clauses, 1):
        for j, lit in enumerate(clause, 1):
            bucket = pos if lit > 0 else neg
            bucket.setdefault(abs(lit), []).append((i, j))
    pairs: list[ConflictPair] = []
    for var in range(1, formula.var_count + 1):
        for p in pos.get(var, ()):
            for q in neg.get(var, ()):
                if p[0] != q[0]:
                    pairs.append(ConflictPair(len(pairs) + 1, p, q))
    return tuple(pairs)


def compile_formula(
    formula: Formula, caps: CapacityPreset = CapacityPreset()
) -> NcInstance:
    """Build the flow-admission instance whose optimum detects satisfiability.

    Accepting all preload flows plus one main copy is possible exactly when
    the formula is satisfiable; with any clause unsatisfied the main flow
    can only cross that clause by overloading its bypass.
    """
    if not formula.clauses:
        raise ValueError("cannot compile an empty formula")
    m = len(formula.clauses)
    table: list[NodeInfo] = []
    edges: list[tuple[str, str]] = []
    for i, clause in enumerate(formula.clauses, 1):
        width = len(clause)
        table.append(NodeInfo(entry_id(i), f"n_1^{i}", "V1", caps.entry_exit))
        table.append(NodeInfo(exit_id(i), f"n_4^{i}", "V1", caps.entry_exit))
        for j in range(1, width + 1):
            table.append(
                NodeInfo(prelit_id(i, j), f"n_{3 * j + 2}^{i}", "V3", caps.entry_exit)
            )
            table.append(
                NodeInfo(lit_id(i, j), f"n_{3 * j + 3}^{i}", "V2", caps.literal)
            )
            table.append(
                NodeInfo(postlit_id(i, j), f"n_{3 * j + 4}^{i}", "V3", caps.entry_exit)
            )
            edges.append((entry_id(i), prelit_id(i, j)))
            edges.append((prelit_id(i, j), lit_id(i, j)))
            edges.append((lit_id(i, j), postlit_id(i, j)))
            edges.append((postlit_id(i, j), exit_id(i)))
        table.append(
            NodeInfo(bypass_id(i), f"n_{3 * width + 5}^{i}", "V4", caps.bypass)
        )
        edges.append((entry_id(i), bypass_id(i)))
        edges.append((bypass_id(i), exit_id(i)))
        for j, j2 in itertools.combinations(range(1, width + 1), 2):
            edges.append((lit_id(i, j), lit_id(i, j2)))
        if i < m:
            edges.append((exit_id(i), entry_id(i + 1)))
    pairs = conflict_pairs(formula)
    for pair in pairs:
        table.append(
            NodeInfo(conflict_id(pair.index), f"n_{pair.index}", "V5", caps.conflict)
        )
        edges.append((conflict_id(pair.index), lit_id(*pair.pos)))
        edges.append((conflict_id(pair.index), lit_id(*pair.neg)))
    for i in range(1, m + 1):
        table.append(NodeInfo(preload_src_id(i), f"A_{i}", "aux", caps.preload_src))
        edges.append((preload_src_id(i), bypass_id(i)))
    table.append(NodeInfo(TERMINAL, None, "aux", caps.terminal))
    edges.append((exit_id(m), TERMINAL))

    network = Network(
        (n.id for n in table), edges, {n.id: n.capacity for n in table}
    )
    flows = tuple(
        FlowRequest(preload_src_id(i), bypass_id(i), 1, f"preload-{i}")
        for i in range(1, m + 1)
    ) + (FlowRequest(entry_id(1), TERMINAL, None, "main"),)
    return NcInstance(network, flows, tuple(table), formula, pairs)


def _require_compiled(inst: NcInstance) -> Formula:
    if inst.formula is None:
        raise ValueError("operation requires an instance compiled from a formula")
    return inst.formula


def true_positions(clause: tuple[int, ...], a: Assignment) -> tuple[int, ...]:
    """1-based positions of the literals made true by ``a``."""
    return tuple(j for j, lit in enumerate(clause, 1) if a[abs(lit)] == (lit > 0))


def clause_segment(i: int, positions: Iterable[int]) -> list[str]:
    """Entry-to-exit node run visiting the given literal positions ascending."""
    pos = sorted(positions)
    if not pos:
        raise ValueError("a clause segment needs at least one literal position")
    nodes = [entry_id(i), prelit_id(i, pos[0])]
    nodes.extend(lit_id(i, j) for j in pos)
    nodes.append(postlit_id(i, pos[-1]))
    nodes.append(exit_id(i))
    return nodes


def assignment_to_path(inst: NcInstance, a: Assignment) -> Path:
    """Canonical main-flow path induced by a total assignment.

    Each clause is crossed through every literal the assignment makes
    true; raises ClauseUnsatisfied on the first clause with none.
    """
    formula = _require_compiled(inst)
    _require_total(formula, a)
    m = len(formula.clauses)
    nodes = [entry_id(1)]
    for i, clause in enumerate(formula.clauses, 1):
        trues = true_positions(clause, a)
        if not trues:
            raise ClauseUnsatisfied(i)
        nodes.extend(clause_segment(i, trues)[1:])
        if i < m:
            nodes.append(entry_id(i + 1))
    nodes.append(TERMINAL)
    return tuple(nodes)


def path_to_assignment(inst: NcInstance, p: Path) -> Assignment:
    """Partial assignment read off the literal nodes a path visits."""
    formula = _require_compiled(inst)
    for v in p:
        if not inst.network.has_node(v):
            raise ValueError(f"unknown node {v!r}")
    values: Assignment = {}
    for i, clause in enumerate(formula.clauses, 1):
        for j, lit in enumerate(clause, 1):
            if lit_id(i, j) not in p:
                continue
            var, wanted = abs(lit), lit > 0
            if values.get(var, wanted) != wanted:
                raise AssignmentContradiction(var)
            values[var] = wanted
    return values


def preload_plan(inst: NcInstance) -> RoutePlan:
    """All preload flows routed over their single one-hop path."""
    _require_compiled(inst)
    return RoutePlan(
        tuple(
            RouteAssignment(flow, 0, (flow.src, flow.dst))
            for flow in inst.flows[:-1]
        )
    )


def _preload_hops(inst: NcInstance) -> list[Hop]:
    return [(flow.src, flow.dst) for flow in inst.flows[:-1]]


@dataclass(frozen=True)
class PathClassification:
    kind: str  # "feasible" | "overloaded" | "malformed"
    bad_hop: Hop | None = None
    reason: str = ""
    overloads: tuple[Overload, ...] = ()


def classify_path(inst: NcInstance, p: Path) -> PathClassification:
    """Judge a candidate main-flow path with all preloads routed."""
    _require_compiled(inst)
    net = inst.network
    for v in p:
        if not net.has_node(v):
            raise ValueError(f"unknown node {v!r}")
    if not is_elementary(p):
        repeat = next(v for idx, v in enumerate(p) if v in p[:idx])
        return PathClassification("malformed", reason=f"node {repeat!r} repeats")
    for u, x in zip(p, p[1:]):
        if not net.has_edge(u, x):
            return PathClassification(
                "malformed", bad_hop=(u, x), reason=f"hop ({u!r}, {x!r}) is not an edge"
            )
    loads = hops_load(net, _preload_hops(inst) + list(zip(p, p[1:])))
    overloads = tuple(
        Overload(v, loads[v], net.capacity_of(v))
        for v in sorted(net.nodes)
        if loads[v] > net.capacity_of(v)
    )
    if overloads:
        return PathClassification("overloaded", overloads=overloads)
    return PathClassification("feasible")


def realizable_true_sets(clause: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Every non-empty true-position set some assignment induces on a clause."""
    variables = sorted({abs(lit) for lit in clause})
    seen: set[tuple[int, ...]] = set()
    for bits in itertools.product((False, True), repeat=len(variables)):
        a = dict(zip(variables, bits))
        trues = true_positions(clause, a)
        if trues:
            seen.add(trues)
    return sorted(seen)


@dataclass(frozen=True)
class ClauseAudit:
    clause: int
    margins: Mapping[str, int]  # min (capacity - load) per node subset
    bypass_blocked: bool
    conflict_blocked: bool
    through_route_blocked: bool


@dataclass(frozen=True)
class AuditReport:
    clauses: tuple[ClauseAudit, ...]
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def _clause_context(inst: NcInstance, i: int) -> tuple[list[Hop], list[Hop]]:
    # Hops adjacent clauses contribute to clause i's nodes on any main route:
    # the chain hop in, the chain hop out, and the next entry's first
    # transmission (which reaches this clause's exit node).
    m = inst.clause_count
    pre = [(exit_id(i - 1), entry_id(i))] if i > 1 else []
    if i < m:
        post = [
            (exit_id(i), entry_id(i + 1)),
            (entry_id(i + 1), prelit_id(i + 1, 1)),
        ]
    else:
        post = [(exit_id(m), TERMINAL)]
    return pre, post


def _pairs_touching(inst: NcInstance, i: int) -> list[ConflictPair]:
    return [p for p in inst.conflicts if i in (p.pos[0], p.neg[0])]


def audit(inst: NcInstance) -> AuditReport:
    """Check the gadget's blocking arithmetic clause by clause.

    With preloads routed: (1) a main route over the bypass overloads it;
    (2) every assignment-realizable literal segment fits; (3) routing
    through a conflict node overloads it; (4) transmitting from both
    literal nodes of a complementary pair overloads their conflict node.
    All computed by exact load arithmetic on the relevant hops.
    """
    formula = _require_compiled(inst)
    net = inst.network
    cap = net.capacity
    records: list[ClauseAudit] = []
    failures: list[str] = []
    for i, clause in enumerate(formula.clauses, 1):
        pre, post = _clause_context(inst, i)
        preload = [(preload_src_id(i), bypass_id(i))]
        watch = [entry_id(i), exit_id(i), bypass_id(i), preload_src_id(i)]
        for j in range(1, len(clause) + 1):
            watch += [prelit_id(i, j), lit_id(i, j), postlit_id(i, j)]
        watch += [conflict_id(p.index) for p in _pairs_touching(inst, i)]
        if i == inst.clause_count:
            watch.append(TERMINAL)

        margins: dict[str, int] = {}
        for trues in realizable_true_sets(clause):
            seg = clause_segment(i, trues)
            hops = preload + pre + list(zip(seg, seg[1:])) + post
            loads = hops_load(net, hops)
            for v in watch:
                margin = cap[v] - loads[v]
                subset = inst.subset_of(v)
                margins[subset] = min(margins.get(subset, margin), margin)
                if margin < 0:
                    msg = f"clause {i}: intended segment overloads {v}"
                    if msg not in failures:
                        failures.append(msg)

        route = [entry_id(i), bypass_id(i), exit_id(i)]
        loads = hops_load(net, preload + pre + list(zip(route, route[1:])) + post)
        bypass_blocked = loads[bypass_id(i)] > cap[bypass_id(i)]
        if not bypass_blocked:
            failures.append(f"clause {i}: bypass not blocked")

        conflict_blocked = True
        through_blocked = True
        for pair in _pairs_touching(inst, i):
            k = conflict_id(pair.index)
            la, lb = lit_id(*pair.pos), lit_id(*pair.neg)
            both_tx = hops_load(
                net, [(la, prelit_id(*pair.pos)), (lb, prelit_id(*pair.neg))]
            )
            if both_tx[k] <= cap[k]:
                conflict_blocked = False
                failures.append(f"clause {i}: conflict not blocked ({k})")
            through = hops_load(net, [(la, k), (k, lb)])
            if through[k] <= cap[k]:
                through_blocked = False
                failures.append(f"clause {i}: conflict through-route not blocked ({k})")

        records.append(
            ClauseAudit(i, margins, bypass_blocked, conflict_blocked, through_blocked)
        )
    return AuditReport(tuple(records), tuple(failures))


def traversable_clauses(inst: NcInstance, a: Assignment) -> int:
    """Clauses whose induced segment exists and stays within capacity.

    The main walk crosses satisfied clauses through their true literals
    and unsatisfied ones over the bypass; a clause counts when its segment
    nodes and their conflict neighbors carry no overload under the walk
    plus all preloads.
    """
    formula = _require_compiled(inst)
    _require_total(formula, a)
    net = inst.network
    m = len(formula.clauses)
    walk = [entry_id(1)]
    trues_by_clause: list[tuple[int, ...]] = []
    for i, clause in enumerate(formula.clauses, 1):
        trues = true_positions(clause, a)
        trues_by_clause.append(trues)
        if trues:
            walk.extend(clause_segment(i, trues)[1:])
        else:
            walk.extend([bypass_id(i), exit_id(i)])
        if i < m:
            walk.append(entry_id(i + 1))
    walk.append(TERMINAL)
    loads = hops_load(net, _preload_hops(inst) + list(zip(walk, walk[1:])))
    cap = net.capacity
    count = 0
    for i, trues in enumerate(trues_by_clause, 1):
        if not trues:
            continue
        nodes = set(clause_segment(i, trues))
        for pair in _pairs_touching(inst, i):
            if (pair.pos[0] == i and pair.pos[1] in trues) or (
                pair.neg[0] == i and pair.neg[1] in trues
            ):
                nodes.add(conflict_id(pair.index))
        if all(loads[v] <= cap[v] for v in nodes):
            count += 1
    return count
