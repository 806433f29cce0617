"""Propositional CNF, Tseitin encoding and a small deterministic DPLL solver.

Variables are positive ints; literals are signed ints as in DIMACS.  The
solver branches on the lowest unassigned variable, trying ``False`` first,
so models and search order are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .model import And, Atom, Exists, Forall, Formula, Iff, Implies, Not, Or

Clause = tuple[int, ...]


@dataclass
class CNF:
    num_vars: int = 0
    clauses: list[Clause] = field(default_factory=list)

    def add(self, *lits: int) -> None:
        self.clauses.append(tuple(lits))

    def to_dimacs(self, comments: Sequence[str] = ()) -> str:
        lines = [f"c {c}" for c in comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, cl)) + " 0" for cl in self.clauses)
        return "\n".join(lines) + "\n"


class Tseitin:
    """Encode quantifier-free formulas into clauses over a shared atom map.

    ``atom_var`` resolves ground atoms to variable ids; ``fresh`` hands out
    auxiliary ids, which must never coincide with atom ids.
    """

    def __init__(self, atom_var: Callable[[Atom], int], fresh: Callable[[], int]):
        self.atom_var = atom_var
        self.fresh = fresh
        self.clauses: list[Clause] = []
        self._cache: dict[Formula, int] = {}

    def literal(self, f: Formula) -> int:
        if isinstance(f, Atom):
            return self.atom_var(f)
        if isinstance(f, Not):
            return -self.literal(f.body)
        if isinstance(f, (Forall, Exists)):
            raise ValueError("quantified formula reached the Tseitin encoder; propositionalize first")
        hit = self._cache.get(f)
        if hit is not None:
            return hit
        cl = self.clauses
        if isinstance(f, (And, Or)):
            parts = [self.literal(p) for p in f.parts]
            v = self.fresh()
            if isinstance(f, And):
                for p in parts:
                    cl.append((-v, p))
                cl.append((v, *(-p for p in parts)))
            else:
                cl.append((-v, *parts))
                for p in parts:
                    cl.append((v, -p))
        elif isinstance(f, Implies):
            a, b = self.literal(f.left), self.literal(f.right)
            v = self.fresh()
            cl += [(-v, -a, b), (v, a), (v, -b)]
        elif isinstance(f, Iff):
            a, b = self.literal(f.left), self.literal(f.right)
            v = self.fresh()
            cl += [(-v, -a, b), (-v, a, -b), (v, a, b), (v, -a, -b)]
        else:  # pragma: no cover - exhaustive over Formula
            raise TypeError(f"not a formula: {f!r}")
        self._cache[f] = v
        return v

    def assert_formula(self, f: Formula) -> None:
        """Add clauses forcing ``f``; top-level conjunctions and clauses stay flat."""
        if isinstance(f, And):
            for p in f.parts:
                self.assert_formula(p)
            return
        flat = _as_clause(f)
        if flat is not None:
            self.clauses.append(tuple(self.literal(x) for x in flat))
            return
        self.clauses.append((self.literal(f),))


def _as_clause(f: Formula) -> list[Formula] | None:
    """Disjunction of literals, viewed as a list of literal formulas."""
    parts = f.parts if isinstance(f, Or) else (f,)
    for p in parts:
        q = p.body if isinstance(p, Not) else p
        if isinstance(q, Not):
            q = q.body
        if not isinstance(q, Atom):
            return None
    return list(parts)


def solve(clauses: Iterable[Clause], num_vars: int, assumptions: Iterable[int] = ()) -> dict[int, bool] | None:
    """Return a model as ``{var: value}`` or ``None`` when unsatisfiable.

    Complete DPLL with unit propagation.  ``assumptions`` are literals fixed
    before search; contradictory assumptions make the problem unsatisfiable.
    """
    clauses = [tuple(c) for c in clauses]
    for c in clauses:
        for lit in c:
            if abs(lit) > num_vars:
                num_vars = abs(lit)
    assign: list[int] = [0] * (num_vars + 1)  # 0 unassigned, 1 true, -1 false
    occurs: list[list[int]] = [[] for _ in range(num_vars + 1)]
    for i, c in enumerate(clauses):
        if not c:
            return None
        for lit in c:
            occurs[abs(lit)].append(i)
    trail: list[int] = []

    def value(lit: int) -> int:
        v = assign[abs(lit)]
        return v if lit > 0 else -v

    def set_lit(lit: int) -> bool:
        cur = value(lit)
        if cur == 1:
            return True
        if cur == -1:
            return False
        assign[abs(lit)] = 1 if lit > 0 else -1
        trail.append(abs(lit))
        return True

    def propagate(start: int) -> bool:
        head = start
        pending: Iterable[int] = range(len(clauses)) if start == 0 else ()
        while True:
            if not pending:
                new = trail[head:]
                if not new:
                    return True
                pending = sorted({i for v in new for i in occurs[v]})
            head = len(trail)
            for i in pending:
                unassigned = 0
                last = 0
                for lit in clauses[i]:
                    val = value(lit)
                    if val == 1:
                        break
                    if val == 0:
                        unassigned += 1
                        last = lit
                else:
                    if unassigned == 0:
                        return False
                    if unassigned == 1:
                        set_lit(last)
            pending = ()

    for lit in assumptions:
        if abs(lit) > num_vars:
            raise ValueError(f"assumption on unknown variable {lit}")
        if not set_lit(lit):
            return None
    if not propagate(0):
        return None

    # iterative DPLL: stack of (trail length before decision, decision literal, tried both)
    stack: list[tuple[int, int, bool]] = []
    while True:
        var = next((v for v in range(1, num_vars + 1) if assign[v] == 0), 0)
        if var == 0:
            return {v: assign[v] == 1 for v in range(1, num_vars + 1)}
        mark = len(trail)
        stack.append((mark, -var, False))
        set_lit(-var)
        ok = propagate(mark)
        while not ok:
            # backtrack to the most recent decision with an untried branch
            while stack and stack[-1][2]:
                m, _, _ = stack.pop()
                _undo(assign, trail, m)
            if not stack:
                return None
            m, lit, _ = stack.pop()
            _undo(assign, trail, m)
            stack.append((m, -lit, True))
            set_lit(-lit)
            ok = propagate(m)


def _undo(assign: list[int], trail: list[int], mark: int) -> None:
    while len(trail) > mark:
        assign[trail.pop()] = 0


def satisfiable_cnf(cnf: CNF, assumptions: Iterable[int] = ()) -> bool:
    return solve(cnf.clauses, cnf.num_vars, assumptions) is not None
