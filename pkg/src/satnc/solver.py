"""Exact and greedy flow-admission solvers plus the hardness-bound constant."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gadget import NcInstance
from .model import Network, Path, RouteAssignment, RoutePlan

DEFAULT_NODE_BUDGET = 10_000_000
DEFAULT_PATH_LIMIT = 100_000


@dataclass(frozen=True)
class SolveResult:
    accepted_count: int
    plan: RoutePlan
    optimal: bool
    nodes_explored: int
    wall_budget_hit: bool
    warnings: tuple[str, ...] = ()


class _Stop(Exception):
    pass


def _tx_sets(net: Network) -> dict[str, tuple[str, ...]]:
    # Everything a transmission from v loads: v plus its whole neighborhood.
    return {v: (v, *net.adjacency(v)) for v in net.nodes}


def enum_paths(
    net: Network,
    s: str,
    t: str,
    budget: dict[str, int] | None = None,
    limit: int = DEFAULT_PATH_LIMIT,
) -> tuple[list[Path], bool]:
    """All elementary s-t paths whose own load fits the per-node budget.

    Depth-first with ascending neighbor ids, pruning a prefix as soon as
    any node's accumulated load exceeds its budget (prefix load is a lower
    bound on the full path's load).  Returns at most ``limit`` paths plus
    a flag telling whether the enumeration was truncated.
    """
    if s == t:
        raise ValueError("source equals destination")
    net._require(s)
    net._require(t)
    adj_sorted = {v: sorted(net.adjacency(v)) for v in net.nodes}
    tx = _tx_sets(net)
    loads = dict.fromkeys(net.nodes, 0)
    paths: list[Path] = []
    truncated = False
    trail: list[str] = [s]
    on_trail = {s}

    def dfs(u: str) -> None:
        nonlocal truncated
        if u == t:
            if len(paths) >= limit:
                truncated = True
                raise _Stop
            paths.append(tuple(trail))
            return
        for v in tx[u]:
            loads[v] += 1
        try:
            if budget is None or all(
                v not in budget or loads[v] <= budget[v] for v in tx[u]
            ):
                for w in adj_sorted[u]:
                    if w in on_trail:
                        continue
                    trail.append(w)
                    on_trail.add(w)
                    try:
                        dfs(w)
                    finally:
                        trail.pop()
                        on_trail.discard(w)
        finally:
            for v in tx[u]:
                loads[v] -= 1

    try:
        dfs(s)
    except _Stop:
        pass
    return paths, truncated


def _effective_copies(inst: NcInstance, unlimited_cap: int | None) -> list[int]:
    # Unbounded demands are searched up to a finite cap; by default one
    # more copy than there are demands, which is enough to witness the
    # optimum on compiled instances.
    if unlimited_cap is None:
        unlimited_cap = len(inst.flows) + 1
    return [f.copies if f.copies is not None else unlimited_cap for f in inst.flows]


def _path_delta(tx: dict[str, tuple[str, ...]], path: Path) -> dict[str, int]:
    delta: dict[str, int] = {}
    for u in path[:-1]:
        for v in tx[u]:
            delta[v] = delta.get(v, 0) + 1
    return delta


def solve_exact(
    inst: NcInstance,
    budget: int = DEFAULT_NODE_BUDGET,
    unlimited_cap: int | None = None,
    path_limit: int = DEFAULT_PATH_LIMIT,
) -> SolveResult:
    """Maximize the number of accepted copies by branch and bound.

    Flows are considered in demand order, but acceptance subsets are
    searched: any copy may be rejected if that lets later flows through.
    Branches are cut with an admissible bound from the remaining copy
    supply, capped per flow by how many copies the residual capacity at
    its endpoints could still carry.  The result is optimal unless the
    node budget ran out or path enumeration was truncated.
    """
    net = inst.network
    caps = dict(net.capacity)
    tx = _tx_sets(net)
    copies = _effective_copies(inst, unlimited_cap)
    warnings: list[str] = []

    candidates: list[list[Path]] = []
    deltas: list[list[dict[str, int]]] = []
    min_src: list[int] = []
    min_dst: list[int] = []
    for flow in inst.flows:
        paths, truncated = enum_paths(net, flow.src, flow.dst, dict(caps), path_limit)
        if truncated:
            warnings.append(f"path enumeration truncated for flow {flow.label!r}")
        candidates.append(paths)
        ds = [_path_delta(tx, p) for p in paths]
        deltas.append(ds)
        min_src.append(min((d[flow.src] for d in ds), default=1))
        min_dst.append(min((d[flow.dst] for d in ds), default=1))

    load = dict.fromkeys(net.nodes, 0)
    plan: list[RouteAssignment] = []
    best_count = -1
    best_plan: tuple[RouteAssignment, ...] = ()
    explored = 0
    budget_hit = False

    def endpoint_ub(fi: int) -> int:
        if not candidates[fi]:
            return 0
        flow = inst.flows[fi]
        room_src = caps[flow.src] - load[flow.src]
        room_dst = caps[flow.dst] - load[flow.dst]
        if room_src <= 0 or room_dst <= 0:
            return 0
        return min(room_src // min_src[fi], room_dst // min_dst[fi])

    def supply_bound(fi: int, ci: int) -> int:
        total = min(copies[fi] - ci, endpoint_ub(fi))
        for g in range(fi + 1, len(inst.flows)):
            total += min(copies[g], endpoint_ub(g))
        return total

    def descend(fi: int, ci: int, min_cand: int, accepted: int) -> None:
        nonlocal best_count, best_plan, explored
        explored += 1
        if explored > budget:
            raise _Stop
        if fi == len(inst.flows):
            if accepted > best_count:
                best_count = accepted
                best_plan = tuple(plan)
            return
        if accepted + supply_bound(fi, ci) <= best_count:
            return
        if ci >= copies[fi]:
            descend(fi + 1, 0, 0, accepted)
            return
        for idx in range(min_cand, len(candidates[fi])):
            delta = deltas[fi][idx]
            if any(load[v] + n > caps[v] for v, n in delta.items()):
                continue
            for v, n in delta.items():
                load[v] += n
            plan.append(RouteAssignment(inst.flows[fi], ci, candidates[fi][idx]))
            try:
                descend(fi, ci + 1, idx, accepted + 1)
            finally:
                plan.pop()
                for v, n in delta.items():
                    load[v] -= n
            if accepted + supply_bound(fi, ci) <= best_count:
                break
        # stop routing this flow here and move on
        descend(fi + 1, 0, 0, accepted)

    try:
        descend(0, 0, 0, 0)
    except _Stop:
        budget_hit = True

    return SolveResult(
        accepted_count=best_count if best_count >= 0 else 0,
        plan=RoutePlan(best_plan),
        optimal=not budget_hit and not warnings,
        nodes_explored=explored,
        wall_budget_hit=budget_hit,
        warnings=tuple(warnings),
    )


def solve_greedy(
    inst: NcInstance,
    unlimited_cap: int | None = None,
    path_limit: int = DEFAULT_PATH_LIMIT,
) -> SolveResult:
    """Admit copies in demand order, each over the feasible path with the
    fewest hops (node ids break ties); a demand stops at its first
    rejection.  Never certified optimal."""
    net = inst.network
    caps = dict(net.capacity)
    tx = _tx_sets(net)
    copies = _effective_copies(inst, unlimited_cap)
    warnings: list[str] = []
    load = dict.fromkeys(net.nodes, 0)
    plan: list[RouteAssignment] = []
    for fi, flow in enumerate(inst.flows):
        for ci in range(copies[fi]):
            remaining = {v: caps[v] - load[v] for v in net.nodes}
            paths, truncated = enum_paths(net, flow.src, flow.dst, remaining, path_limit)
            if truncated:
                warnings.append(f"path enumeration truncated for flow {flow.label!r}")
            if not paths:
                break
            choice = min(paths, key=lambda p: (len(p), p))
            for v, n in _path_delta(tx, choice).items():
                load[v] += n
            plan.append(RouteAssignment(flow, ci, choice))
    return SolveResult(
        accepted_count=len(plan),
        plan=RoutePlan(tuple(plan)),
        optimal=False,
        nodes_explored=0,
        wall_budget_hit=False,
        warnings=tuple(warnings),
    )


def inapprox_bound(k: int) -> Fraction:
    """The approximation-hardness constant 1/(1 - 2**-k) as an exact rational."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return Fraction(2**k, 2**k - 1)
