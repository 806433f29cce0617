"""Finite-domain classical entailment over the constant set of a knowledge base.

Quantifiers range exactly over ``Phi_C`` (domain closure, unique names), so
every sentence reduces to a propositional formula over ground atoms and each
query becomes one SAT call.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Iterable, Sequence

from .errors import GroundingError, ResourceLimitError
from .model import (And, Atom, Exists, Forall, Formula, Iff, Implies, KnowledgeBase, LiteralSet, Not, Or, Term,
                    atoms_of, format_literal, free_variables, substitute)
from .sat import Tseitin, solve

DEFAULT_MAX_EXTENSION_ATOMS = 20


def propositionalize(formula: Formula, constants: Iterable[str]) -> Formula:
    """Expand quantifiers over ``constants``: ``forall`` to ``&``, ``exists`` to ``|``."""
    free = free_variables(formula)
    if free:
        raise GroundingError(f"free variable(s) {', '.join(sorted(free))} in {formula}")
    return _expand(formula, tuple(Term(c) for c in sorted(constants)))


def _expand(f: Formula, consts: tuple[Term, ...]) -> Formula:
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(_expand(f.body, consts))
    if isinstance(f, And):
        return And(tuple(_expand(p, consts) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_expand(p, consts) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(_expand(f.left, consts), _expand(f.right, consts))
    if isinstance(f, Iff):
        return Iff(_expand(f.left, consts), _expand(f.right, consts))
    if not consts:
        raise GroundingError(f"cannot expand {f} over an empty domain")
    insts = tuple(_expand(substitute(f.body, {f.variable: c}), consts) for c in consts)
    if len(insts) == 1:
        return insts[0]
    return And(insts) if isinstance(f, Forall) else Or(insts)


def _is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Forall, Exists)):
        return False
    if isinstance(f, Atom):
        return True
    parts = (f.body,) if isinstance(f, Not) else f.parts if isinstance(f, (And, Or)) else (f.left, f.right)
    return all(_is_quantifier_free(p) for p in parts)


class Entailer:
    """Per-knowledge-base entailment store.

    The theory is propositionalized and encoded once.  Atom variables are
    numbered in sorted order of the atoms known at construction; atoms first
    seen in later queries are appended.  Query results are memoized on the
    full premise set, so cached answers stay valid when the caller's
    interpretation changes.
    """

    def __init__(self, theory: Sequence[Formula], constants: Iterable[str], *,
                 universe: Iterable[Atom] = (), dump_cnf: str | Path | None = None):
        self.constants = tuple(sorted(constants))
        self.theory = tuple(propositionalize(f, self.constants) for f in theory)
        self._lock = threading.RLock()
        self._var: dict[Atom, int] = {}
        self._atoms: list[Atom] = []
        self._next = 1
        known = set(universe)
        for f in self.theory:
            known.update(atoms_of(f))
        for a in sorted(known):
            self.var(a)
        enc = Tseitin(self.var, self._fresh_global)
        for f in self.theory:
            enc.assert_formula(f)
        self._theory_clauses = tuple(enc.clauses)
        self._ground_cache: dict[Formula, Formula] = {}
        self._memo: dict[tuple, bool] = {}
        self._dump_dir = Path(dump_cnf) if dump_cnf is not None else None
        self._dump_count = 0
        self.queries = 0
        self.solver_calls = 0

    @classmethod
    def for_kb(cls, kb: KnowledgeBase, **kwargs) -> "Entailer":
        universe = set(kb.herbrand_base)
        for r in kb.rules:
            for e in r.body:
                if not free_variables(e.formula):
                    universe.update(atoms_of(propositionalize(e.formula, kb.constants)))
        return cls(kb.theory, kb.constants, universe=universe, **kwargs)

    # variable map -------------------------------------------------------

    def var(self, atom: Atom) -> int:
        with self._lock:
            v = self._var.get(atom)
            if v is None:
                v = self._next
                self._next += 1
                self._var[atom] = v
                self._atoms.append(atom)
            return v

    def _fresh_global(self) -> int:
        v = self._next
        self._next += 1
        return v

    @property
    def var_map(self) -> dict[Atom, int]:
        return dict(self._var)

    # queries ------------------------------------------------------------

    def ground(self, f: Formula) -> Formula:
        hit = self._ground_cache.get(f)
        if hit is None:
            hit = f if _is_quantifier_free(f) else propositionalize(f, self.constants)
            self._ground_cache[f] = hit
        return hit

    def satisfiable(self, premises: LiteralSet, extra: Sequence[Formula] = ()) -> bool:
        """Is ``L`` together with ``premises`` (and ``extra`` formulas) satisfiable?"""
        if not premises.consistent():
            return False
        extra = tuple(self.ground(f) for f in extra)
        key = ("sat", premises.positives, premises.negatives, extra)
        with self._lock:
            hit = self._memo.get(key)
            if hit is not None:
                return hit
            self.queries += 1
            result = self._solve(premises, extra, key)
            self._memo[key] = result
            return result

    def entails(self, premises: LiteralSet, phi: Formula) -> bool:
        """``L`` with ``premises`` classically entails ``phi``; true under unsatisfiable premises."""
        return not self.satisfiable(premises, (Not(phi),))

    def consistent(self, premises: LiteralSet) -> bool:
        return self.satisfiable(premises)

    def _solve(self, premises: LiteralSet, extra: tuple[Formula, ...], key: tuple) -> bool:
        for f in extra:
            for a in atoms_of(f):
                self.var(a)
        for a in premises.atoms():
            self.var(a)
        local_next = [self._next]

        def fresh() -> int:
            v = local_next[0]
            local_next[0] += 1
            return v

        enc = Tseitin(self.var, fresh)
        for f in extra:
            enc.assert_formula(f)
        assumptions = [self._var[a] for a in sorted(premises.positives)]
        assumptions += [-self._var[a] for a in sorted(premises.negatives)]
        clauses = list(self._theory_clauses) + enc.clauses
        num_vars = local_next[0] - 1
        self.solver_calls += 1
        if self._dump_dir is not None:
            self._dump(clauses, assumptions, num_vars, premises, extra)
        return solve(clauses, num_vars, assumptions) is not None

    def _dump(self, clauses, assumptions, num_vars, premises, extra) -> None:
        self._dump_dir.mkdir(parents=True, exist_ok=True)
        self._dump_count += 1
        comments = ["premises: " + ", ".join(format_literal(a, s) for a, s in premises.literals())]
        comments += [f"formula: {f}" for f in extra]
        comments += [f"var {v} {a}" for a, v in sorted(self._var.items(), key=lambda kv: kv[1])]
        lines = [f"c {c}" for c in comments]
        body = clauses + [(lit,) for lit in assumptions]
        lines.append(f"p cnf {num_vars} {len(body)}")
        lines += [" ".join(map(str, c)) + " 0" for c in body]
        (self._dump_dir / f"query-{self._dump_count:05d}.cnf").write_text("\n".join(lines) + "\n")

    # extension checks ---------------------------------------------------

    def forall_extensions_fail(self, base: LiteralSet, phi: Formula, omega_atoms: Iterable[Atom], *,
                               max_atoms: int = DEFAULT_MAX_EXTENSION_ATOMS) -> bool:
        """No extension of ``base`` that is consistent with ``L`` entails ``phi``.

        ``base`` is projected onto ``omega_atoms`` first.  Only completions
        over the unassigned Omega-atoms that actually occur in ``L`` or
        ``phi`` are searched; the others cannot change any answer.  When no
        extension is consistent with ``L`` the statement holds vacuously.
        """
        omega_atoms = frozenset(omega_atoms)
        if not base.consistent():
            raise ValueError("extension check on inconsistent base")
        b = LiteralSet(base.positives & omega_atoms, base.negatives & omega_atoms)
        phi_g = self.ground(phi)
        relevant = set(atoms_of(phi_g))
        for f in self.theory:
            relevant.update(atoms_of(f))
        free = sorted((omega_atoms & relevant) - b.atoms())
        if len(free) > max_atoms:
            raise ResourceLimitError("extension check", len(free), max_atoms)
        return self._extensions_fail(b, phi_g, free)

    def _extensions_fail(self, s: LiteralSet, phi: Formula, free: list[Atom]) -> bool:
        if not self.satisfiable(s):
            return True
        if not self.satisfiable(s, (phi,)):
            return True
        if self.entails(s, phi):
            return False
        if not free:  # pragma: no cover - a total, L-consistent s decides phi
            return True
        head, rest = free[0], free[1:]
        return (self._extensions_fail(s | LiteralSet.negated([head]), phi, rest)
                and self._extensions_fail(s | LiteralSet.of_atoms([head]), phi, rest))


# module-level conveniences ------------------------------------------------

def _domain(formulas: Iterable[Formula], premises: LiteralSet = LiteralSet()) -> set[str]:
    out: set[str] = set()
    for f in formulas:
        for a in atoms_of(f):
            out.update(t.name for t in a.args if not t.variable)
    for a in premises.atoms():
        out.update(t.name for t in a.args)
    return out


def satisfiable(formulas: Sequence[Formula], constants: Iterable[str] | None = None) -> bool:
    """Satisfiability of a set of sentences (quantifiers expanded over ``constants``)."""
    consts = _domain(formulas) if constants is None else set(constants)
    ent = Entailer((), consts)
    return ent.satisfiable(LiteralSet(), tuple(propositionalize(f, consts) for f in formulas))


def entails(theory: Sequence[Formula], premises: LiteralSet, phi: Formula,
            constants: Iterable[str] | None = None) -> bool:
    """``theory`` plus the literals of ``premises`` entails ``phi``.

    The domain defaults to the constants mentioned by the arguments.
    """
    consts = _domain([*theory, phi], premises) if constants is None else set(constants)
    return Entailer(theory, consts).entails(premises, propositionalize(phi, consts))


def consistent_with(theory: Sequence[Formula], s: LiteralSet, omega: Iterable[str],
                    constants: Iterable[str] | None = None) -> bool:
    """``s`` is a consistent literal set and ``theory`` plus ``s`` restricted to Omega is satisfiable."""
    if not s.consistent():
        return False
    consts = _domain(theory, s) if constants is None else set(constants)
    return Entailer(theory, consts).satisfiable(s.project(omega))


def forall_extensions_fail(kb: KnowledgeBase, base: LiteralSet, phi: Formula, *,
                           max_atoms: int = DEFAULT_MAX_EXTENSION_ATOMS,
                           entailer: Entailer | None = None) -> bool:
    ent = entailer or Entailer.for_kb(kb)
    return ent.forall_extensions_fail(base, phi, kb.omega_atoms, max_atoms=max_atoms)
