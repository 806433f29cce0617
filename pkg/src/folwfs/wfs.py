"""Unfounded sets, the operators T, U, Z and W, and their least fixpoint.

All operators take a literal set ``I`` over the Herbrand base.  ``I`` counts
as inconsistent with the theory when it is contradictory as a literal set or
when ``L`` together with its Omega-part is unsatisfiable; in that case T and
U return the whole Herbrand base.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .entailment import DEFAULT_MAX_EXTENSION_ATOMS, Entailer
from .model import (Atom, BodyElem, Formula, KnowledgeBase, LiteralSet, Not, SemanticsResult, ground_program,
                    label_atoms)


@dataclass(frozen=True)
class OperatorState:
    current: LiteralSet
    step: int
    inconsistent_with_theory: bool


class Engine:
    """Operators of one grounded knowledge base, sharing an entailment store."""

    def __init__(self, kb: KnowledgeBase, *, max_extension_atoms: int = DEFAULT_MAX_EXTENSION_ATOMS,
                 dump_cnf: str | Path | None = None, entailer: Entailer | None = None):
        self.kb = ground_program(kb)
        self.hb: tuple[Atom, ...] = self.kb.herbrand_base
        self.hb_set = frozenset(self.hb)
        self.omega_atoms = frozenset(self.kb.omega_atoms)
        self.max_extension_atoms = max_extension_atoms
        self.entailer = entailer or Entailer.for_kb(self.kb, dump_cnf=dump_cnf)
        self._rules = {h: self.kb.rules_for(h) for h in self.hb}

    # helpers ------------------------------------------------------------

    def omega_part(self, s: LiteralSet) -> LiteralSet:
        om = self.omega_atoms
        return LiteralSet(s.positives & om, s.negatives & om)

    def inconsistent(self, i: LiteralSet) -> bool:
        """``I`` together with ``L`` is inconsistent."""
        return not i.consistent() or not self.entailer.satisfiable(self.omega_part(i))

    def entails(self, s: LiteralSet, phi: Formula) -> bool:
        return self.entailer.entails(self.omega_part(s), phi)

    def extensions_fail(self, base: LiteralSet, phi: Formula) -> bool:
        """No extension of ``base`` consistent with ``L`` entails ``phi``.

        A contradictory ``base`` has no consistent extension at all, so the
        condition holds vacuously.
        """
        if not base.consistent():
            return True
        return self.entailer.forall_extensions_fail(base, phi, self.omega_atoms,
                                                    max_atoms=self.max_extension_atoms)

    def _check_atoms(self, atoms: Iterable[Atom], what: str) -> frozenset[Atom]:
        atoms = frozenset(atoms)
        extra = atoms - self.hb_set
        if extra:
            raise ValueError(f"{what} is not a subset of the Herbrand base: {', '.join(map(str, sorted(extra)))}")
        return atoms

    # unfounded sets -----------------------------------------------------

    def condition(self, i: LiteralSet, u: frozenset[Atom], head: Atom) -> bool:
        """Conditions (a) and (b) of an unfounded set for one atom ``head``."""
        base = i | LiteralSet.negated(u)
        for rule in self._rules.get(head, ()):
            if not self._rule_blocked(i, base, rule.pos, rule.neg):
                return False
        return self.extensions_fail(base, head)

    def _rule_blocked(self, i: LiteralSet, base: LiteralSet, pos: tuple[BodyElem, ...],
                      neg: tuple[BodyElem, ...]) -> bool:
        # cheap membership tests first, extension searches last
        for e in pos:
            if e.ordinary and e.formula in base.negatives:
                return True
        for e in neg:
            if e.ordinary and e.formula in i.positives:
                return True
        for e in pos:
            if not e.ordinary and self.extensions_fail(base, e.formula):
                return True
        for e in neg:
            if not e.ordinary and self.entails(i, e.formula):
                return True
        return False

    def is_unfounded_set(self, i: LiteralSet, u: Iterable[Atom]) -> bool:
        u = self._check_atoms(u, "U")
        self._check_atoms(i.atoms(), "I")
        if self.inconsistent(i):
            return True
        return all(self.condition(i, u, h) for h in sorted(u))

    def greatest_unfounded_set(self, i: LiteralSet) -> frozenset[Atom]:
        if self.inconsistent(i):
            return self.hb_set
        u = self.hb_set
        while True:
            nxt = frozenset(h for h in self.hb if h in u and self.condition(i, u, h))
            if nxt == u:
                return u
            u = nxt

    # operators ----------------------------------------------------------

    def t_consequences(self, i: LiteralSet) -> frozenset[Atom]:
        if self.inconsistent(i):
            return self.hb_set
        out = set()
        for h in self.hb:
            if any(self._rule_fires(i, r.pos, r.neg) for r in self._rules[h]) or self.entails(i, h):
                out.add(h)
        return frozenset(out)

    def _rule_fires(self, i: LiteralSet, pos: tuple[BodyElem, ...], neg: tuple[BodyElem, ...]) -> bool:
        for e in pos:
            if e.ordinary and e.formula not in i.positives:
                return False
        for e in neg:
            if e.ordinary and e.formula not in i.negatives:
                return False
        for e in pos:
            if not e.ordinary and not self.entails(i, e.formula):
                return False
        for e in neg:
            if not e.ordinary and not self.extensions_fail(i, e.formula):
                return False
        return True

    def u_consequences(self, i: LiteralSet) -> frozenset[Atom]:
        return self.greatest_unfounded_set(i)

    def z_consequences(self, i: LiteralSet) -> frozenset[Atom]:
        return frozenset(a for a in self.hb if self.entails(i, Not(a)))

    def w_step(self, i: LiteralSet) -> LiteralSet:
        t = self.t_consequences(i)
        u = self.greatest_unfounded_set(i)
        z = self.z_consequences(i)
        return LiteralSet(t, u | z)

    def iterate(self) -> list[OperatorState]:
        """Kleene chain ``W^0 = {}``, ``W^(k+1) = W(W^k)``, up to and including the repeated state."""
        cur = LiteralSet()
        states = [OperatorState(cur, 0, self.inconsistent(cur))]
        limit = 2 * len(self.hb) + 2
        while True:
            nxt = self.w_step(cur)
            states.append(OperatorState(nxt, len(states), self.inconsistent(nxt)))
            if nxt == cur:
                return states
            if not cur <= nxt or len(states) > limit:  # pragma: no cover - guarded by monotonicity
                raise RuntimeError("W iteration is not increasing")
            cur = nxt

    def wfs(self) -> SemanticsResult:
        states = self.iterate()
        lfp = states[-1].current
        return SemanticsResult(label_atoms(self.hb, lfp), not lfp.consistent(),
                               tuple(s.current for s in states))


@functools.lru_cache(maxsize=32)
def engine_for(kb: KnowledgeBase, max_extension_atoms: int = DEFAULT_MAX_EXTENSION_ATOMS) -> Engine:
    return Engine(kb, max_extension_atoms=max_extension_atoms)


def is_unfounded_set(kb: KnowledgeBase, i: LiteralSet, u: Iterable[Atom], **kw) -> bool:
    return engine_for(kb, **kw).is_unfounded_set(i, u)


def greatest_unfounded_set(kb: KnowledgeBase, i: LiteralSet, **kw) -> frozenset[Atom]:
    return engine_for(kb, **kw).greatest_unfounded_set(i)


def t_consequences(kb: KnowledgeBase, i: LiteralSet, **kw) -> frozenset[Atom]:
    return engine_for(kb, **kw).t_consequences(i)


def z_consequences(kb: KnowledgeBase, i: LiteralSet, **kw) -> frozenset[Atom]:
    return engine_for(kb, **kw).z_consequences(i)


def w_step(kb: KnowledgeBase, i: LiteralSet, **kw) -> LiteralSet:
    return engine_for(kb, **kw).w_step(i)


def wfs(kb: KnowledgeBase, *, max_extension_atoms: int = DEFAULT_MAX_EXTENSION_ATOMS,
        dump_cnf: str | Path | None = None) -> SemanticsResult:
    if dump_cnf is not None:
        return Engine(kb, max_extension_atoms=max_extension_atoms, dump_cnf=dump_cnf).wfs()
    return engine_for(kb, max_extension_atoms).wfs()
