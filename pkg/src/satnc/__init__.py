"""satnc: a reduction laboratory linking MAX-SAT and wireless flow admission."""

from .cnf import (
    Assignment,
    DimacsParseError,
    EXHAUSTIVE_BOUND,
    Formula,
    all_assignments,
    brute_sat,
    emit_dimacs,
    eval_formula,
    lint_formula,
    max_sat_brute,
    parse_dimacs,
    random_formula,
)
from .gadget import (
    AssignmentContradiction,
    AuditReport,
    CapacityPreset,
    ClauseUnsatisfied,
    ConflictPair,
    NcInstance,
    NodeInfo,
    TERMINAL,
    assignment_to_path,
    audit,
    classify_path,
    compile_formula,
    conflict_pairs,
    path_to_assignment,
    plain_instance,
    preload_plan,
    traversable_clauses,
)
from .harness import TrialRecord, VerificationReport, run_verification
from .instance_io import (
    dumps_instance,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    loads_instance,
    save_instance,
    to_dot,
)
from .model import (
    FeasibilityVerdict,
    FlowRequest,
    LoadMap,
    Network,
    Overload,
    Path,
    PathDefect,
    RouteAssignment,
    RoutePlan,
    check_feasible,
    interference_set,
    is_elementary,
    neighbors,
    path_load,
    plan_load,
)
from .solver import (
    SolveResult,
    enum_paths,
    inapprox_bound,
    solve_exact,
    solve_greedy,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AssignmentContradiction",
    "AuditReport",
    "CapacityPreset",
    "ClauseUnsatisfied",
    "ConflictPair",
    "DimacsParseError",
    "EXHAUSTIVE_BOUND",
    "FeasibilityVerdict",
    "FlowRequest",
    "Formula",
    "LoadMap",
    "NcInstance",
    "Network",
    "NodeInfo",
    "Overload",
    "Path",
    "PathDefect",
    "RouteAssignment",
    "RoutePlan",
    "SolveResult",
    "TERMINAL",
    "TrialRecord",
    "VerificationReport",
    "all_assignments",
    "assignment_to_path",
    "audit",
    "brute_sat",
    "check_feasible",
    "classify_path",
    "compile_formula",
    "conflict_pairs",
    "dumps_instance",
    "emit_dimacs",
    "enum_paths",
    "eval_formula",
    "inapprox_bound",
    "instance_from_dict",
    "instance_to_dict",
    "interference_set",
    "is_elementary",
    "lint_formula",
    "load_instance",
    "loads_instance",
    "max_sat_brute",
    "neighbors",
    "parse_dimacs",
    "path_load",
    "path_to_assignment",
    "plain_instance",
    "plan_load",
    "preload_plan",
    "random_formula",
    "run_verification",
    "save_instance",
    "solve_exact",
    "solve_greedy",
    "to_dot",
    "traversable_clauses",
]
