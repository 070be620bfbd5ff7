"""Instance JSON (schema version 1) and DOT export."""

from __future__ import annotations

import json
from pathlib import Path as FsPath

from .cnf import emit_dimacs, parse_dimacs
from .gadget import ConflictPair, NcInstance, NodeInfo, conflict_pairs
from .model import FlowRequest, Network

SCHEMA_VERSION = 1

_SUBSET_SHAPES = {
    "V1": "box",
    "V2": "ellipse",
    "V3": "circle",
    "V4": "hexagon",
    "V5": "octagon",
    "aux": "diamond",
}


def instance_to_dict(inst: NcInstance) -> dict:
    edges = sorted(tuple(sorted(e)) for e in inst.network.edges())
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": [
            {
                "id": n.id,
                "paper_index": n.paper_index,
                "subset": n.subset,
                "capacity": n.capacity,
            }
            for n in inst.node_table
        ],
        "edges": [list(e) for e in edges],
        "flows": [
            {
                "src": f.src,
                "dst": f.dst,
                "copies": f.copies if f.copies is not None else "unbounded",
                "label": f.label,
            }
            for f in inst.flows
        ],
        "formula": emit_dimacs(inst.formula) if inst.formula is not None else None,
    }


def instance_from_dict(data: dict) -> NcInstance:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema_version {data.get('schema_version')!r}"
        )
    table = tuple(
        NodeInfo(n["id"], n["paper_index"], n["subset"], n["capacity"])
        for n in data["nodes"]
    )
    network = Network(
        (n.id for n in table),
        (tuple(e) for e in data["edges"]),
        {n.id: n.capacity for n in table},
    )
    flows = tuple(
        FlowRequest(
            f["src"],
            f["dst"],
            None if f["copies"] == "unbounded" else f["copies"],
            f["label"],
        )
        for f in data["flows"]
    )
    formula = parse_dimacs(data["formula"]) if data.get("formula") else None
    conflicts: tuple[ConflictPair, ...] = ()
    if formula is not None:
        conflicts = conflict_pairs(formula)
    return NcInstance(network, flows, table, formula, conflicts)


def dumps_instance(inst: NcInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def loads_instance(text: str) -> NcInstance:
    return instance_from_dict(json.loads(text))


def save_instance(inst: NcInstance, path: str | FsPath) -> None:
    FsPath(path).write_text(dumps_instance(inst), encoding="utf-8")


def load_instance(path: str | FsPath) -> NcInstance:
    return loads_instance(FsPath(path).read_text(encoding="utf-8"))


def to_dot(inst: NcInstance) -> str:
    """Undirected DOT drawing: one node line per node (shape by subset,
    capacity in the label), one edge line per undirected edge."""
    lines = ["graph nc {"]
    for n in inst.node_table:
        label = n.id if n.paper_index is None else f"{n.id} {n.paper_index}"
        shape = _SUBSET_SHAPES.get(n.subset, "plaintext")
        lines.append(f'  "{n.id}" [shape={shape}, label="{label} [{n.capacity}]"];')
    for u, v in sorted(tuple(sorted(e)) for e in inst.network.edges()):
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
