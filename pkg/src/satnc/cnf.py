"""CNF formulas, DIMACS text, and exhaustive SAT / MAX-SAT oracles.

Literals are DIMACS-style signed integers: variable ``v`` appears as ``v``
(positive) or ``-v`` (negated).  Assignments are plain dicts mapping the
variable index to a bool.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

Assignment = dict[int, bool]

EXHAUSTIVE_BOUND = 24


class DimacsParseError(ValueError):
    """Malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} at line {line}")
        self.line = line


@dataclass(frozen=True)
class Formula:
    """A CNF formula: ordered clauses of signed-integer literals."""

    var_count: int
    clauses: tuple[tuple[int, ...], ...]
    k_bound: int

    def __post_init__(self) -> None:
        if self.var_count < 1:
            raise ValueError("var_count must be positive")
        if self.k_bound < 2:
            raise ValueError("k_bound must be at least 2")
        for idx, clause in enumerate(self.clauses, 1):
            if not clause:
                raise ValueError(f"clause {idx} is empty")
            if len(clause) > self.k_bound:
                raise ValueError(f"clause {idx} wider than k_bound")
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ValueError(f"clause {idx}: literal {lit} out of range")

    @classmethod
    def from_clauses(
        cls, var_count: int, clauses: list | tuple, k_bound: int | None = None
    ) -> "Formula":
        cl = tuple(tuple(c) for c in clauses)
        if k_bound is None:
            k_bound = max((len(c) for c in cl), default=2)
            k_bound = max(k_bound, 2)
        return cls(var_count, cl, k_bound)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)


def parse_dimacs(text: str) -> Formula:
    """Parse standard DIMACS CNF: ``c`` comments, ``p cnf n m`` header,
    clauses as signed integers terminated by 0 (clauses may span lines)."""
    var_count: int | None = None
    clause_count: int | None = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if var_count is not None:
                raise DimacsParseError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError("malformed header", lineno)
            try:
                var_count, clause_count = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError("malformed header", lineno) from None
            if var_count < 0 or clause_count < 0:
                raise DimacsParseError("malformed header", lineno)
            continue
        if var_count is None:
            raise DimacsParseError("clause before header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"invalid token {tok!r}", lineno) from None
            if lit == 0:
                if not pending:
                    raise DimacsParseError("empty clause", lineno)
                clauses.append(tuple(pending))
                pending.clear()
            else:
                if abs(lit) > var_count:
                    raise DimacsParseError("literal out of range", lineno)
                pending.append(lit)
    last = len(text.splitlines())
    if var_count is None:
        raise DimacsParseError("missing header", max(last, 1))
    if pending:
        raise DimacsParseError("missing clause terminator", max(last, 1))
    if clause_count != len(clauses):
        raise DimacsParseError(
            f"clause count mismatch: header says {clause_count}, found {len(clauses)}",
            max(last, 1),
        )
    return Formula.from_clauses(max(var_count, 1), clauses)


def emit_dimacs(f: Formula) -> str:
    """Round-trip inverse of ``parse_dimacs`` up to comments and whitespace."""
    lines = [f"p cnf {f.var_count} {len(f.clauses)}"]
    for clause in f.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def _require_total(f: Formula, a: Assignment) -> None:
    missing = [v for v in range(1, f.var_count + 1) if v not in a]
    if missing:
        raise ValueError(f"assignment missing variables {missing}")


def clause_satisfied(clause: tuple[int, ...], a: Assignment) -> bool:
    return any(a[abs(lit)] == (lit > 0) for lit in clause)


def eval_formula(f: Formula, a: Assignment) -> int:
    """Number of clauses with at least one true literal under ``a``."""
    _require_total(f, a)
    return sum(1 for clause in f.clauses if clause_satisfied(clause, a))


def _masks(f: Formula) -> list[tuple[int, int]]:
    # Bit of variable v is 1 << (var_count - v), so the integer order of
    # candidate assignments is the lexicographic order with v1 most
    # significant and false < true.
    out = []
    for clause in f.clauses:
        pos = neg = 0
        for lit in clause:
            bit = 1 << (f.var_count - abs(lit))
            if lit > 0:
                pos |= bit
            else:
                neg |= bit
        out.append((pos, neg))
    return out


def _unpack(f: Formula, packed: int) -> Assignment:
    return {
        v: bool(packed & (1 << (f.var_count - v))) for v in range(1, f.var_count + 1)
    }


def brute_sat(f: Formula, bound: int = EXHAUSTIVE_BOUND) -> Assignment | None:
    """First satisfying assignment in lexicographic order, or None.

    Refuses formulas with more than ``bound`` variables: the scan is a
    full 2**n sweep and is meant as ground truth at desk scale only.
    """
    if f.var_count > bound:
        raise ValueError(
            f"{f.var_count} variables exceed the exhaustive bound of {bound}"
        )
    masks = _masks(f)
    full = (1 << f.var_count) - 1
    for packed in range(1 << f.var_count):
        if all(packed & pos or (~packed & full) & neg for pos, neg in masks):
            return _unpack(f, packed)
    return None


def max_sat_brute(
    f: Formula, bound: int = EXHAUSTIVE_BOUND
) -> tuple[int, Assignment]:
    """Maximum satisfiable clause count with a lexicographically-first witness."""
    if f.var_count > bound:
        raise ValueError(
            f"{f.var_count} variables exceed the exhaustive bound of {bound}"
        )
    masks = _masks(f)
    full = (1 << f.var_count) - 1
    best_count, best_packed = -1, 0
    for packed in range(1 << f.var_count):
        count = sum(
            1 for pos, neg in masks if packed & pos or (~packed & full) & neg
        )
        if count > best_count:
            best_count, best_packed = count, packed
            if best_count == len(f.clauses):
                break
    return best_count, _unpack(f, best_packed)


def all_assignments(var_count: int):
    """All total assignments in lexicographic order (false < true)."""
    for bits in itertools.product((False, True), repeat=var_count):
        yield dict(zip(range(1, var_count + 1), bits))


def random_formula(n: int, m: int, k: int, seed: int) -> Formula:
    """m random clauses of exactly k distinct variables, uniform polarities."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < k:
        raise ValueError("need at least k variables")
    if m < 0:
        raise ValueError("clause count must be non-negative")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        variables = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return Formula(n, tuple(clauses), max(k, 2))


def lint_formula(f: Formula) -> list[str]:
    """Non-fatal oddities: duplicate literals, width-1 clauses, tautologies."""
    warnings = []
    for idx, clause in enumerate(f.clauses, 1):
        if len(clause) == 1:
            warnings.append(f"clause {idx}: width 1")
        seen = set()
        for lit in clause:
            if lit in seen:
                warnings.append(f"clause {idx}: duplicate literal {lit}")
            seen.add(lit)
        if any(-lit in seen for lit in seen):
            warnings.append(f"clause {idx}: tautological")
    return warnings
