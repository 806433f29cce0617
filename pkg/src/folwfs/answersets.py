"""Well-supported answer sets: two-valued satisfaction, up-to satisfaction, the
immediate consequence fixpoint and exhaustive enumeration.

A total interpretation is a set of Herbrand-base atoms; every other atom of
the base is false in it.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable

from .errors import ResourceLimitError
from .model import Atom, BodyElem, ElemKind, KnowledgeBase, LiteralSet, ground_program
from .wfs import Engine

DEFAULT_MAX_ENUM_ATOMS = 16
DEFAULT_MAX_UPTO_ATOMS = 16


class AnswerSetSolver:
    def __init__(self, kb: KnowledgeBase, *, max_enum_atoms: int = DEFAULT_MAX_ENUM_ATOMS,
                 max_upto_atoms: int = DEFAULT_MAX_UPTO_ATOMS, engine: Engine | None = None):
        self.engine = engine or Engine(kb)
        self.kb = self.engine.kb
        self.hb = self.engine.hb
        self.omega_atoms = self.engine.omega_atoms
        self.entailer = self.engine.entailer
        self.max_enum_atoms = max_enum_atoms
        self.max_upto_atoms = max_upto_atoms

    def _total(self, i: Iterable[Atom]) -> frozenset[Atom]:
        i = frozenset(i)
        extra = i - self.engine.hb_set
        if extra:
            raise ValueError(f"interpretation outside the Herbrand base: {', '.join(map(str, sorted(extra)))}")
        return i

    def omega_view(self, pos: frozenset[Atom], false: Iterable[Atom]) -> LiteralSet:
        """``pos|Omega`` together with the negation of ``false|Omega``."""
        om = self.omega_atoms
        return LiteralSet(pos & om, frozenset(false) & om)

    def complement(self, i: frozenset[Atom]) -> frozenset[Atom]:
        return self.engine.hb_set - i

    # two-valued ---------------------------------------------------------

    def holds(self, i: frozenset[Atom], elem: BodyElem) -> bool:
        """Truth of the formula of ``elem`` in ``I``, ignoring its polarity."""
        if elem.kind is ElemKind.ORDINARY:
            return elem.formula in i
        return self.entailer.entails(self.omega_view(i, self.complement(i)), elem.formula)

    def satisfies_two_valued(self, i: Iterable[Atom], elem: BodyElem) -> bool:
        i = self._total(i)
        return self.holds(i, elem) != elem.negated

    def is_model(self, i: Iterable[Atom]) -> bool:
        i = self._total(i)
        if not self.entailer.satisfiable(self.omega_view(i, self.complement(i))):
            return False
        for r in self.kb.rules:
            if all(self.holds(i, e) != e.negated for e in r.body):
                head = BodyElem(r.head, False, self._head_kind(r.head))
                if not self.holds(i, head):
                    return False
        return True

    def _head_kind(self, head: Atom) -> ElemKind:
        return ElemKind.FOL if head.predicate in self.kb.omega else ElemKind.ORDINARY

    # up-to satisfaction -------------------------------------------------

    def up_to_satisfies(self, e: Iterable[Atom], i: Iterable[Atom], elem: BodyElem, *,
                        shortcuts: bool = True) -> bool:
        """Every ``F`` with ``E <= F <= I`` satisfies ``elem``."""
        e, i = frozenset(e), self._total(i)
        if not e <= i:
            raise ValueError("E must be a subset of I")
        if shortcuts:
            if elem.kind is ElemKind.ORDINARY:
                return (elem.formula not in i) if elem.negated else (elem.formula in e)
            if not elem.negated:
                return self.entailer.entails(self.omega_view(e, self.complement(i)), elem.formula)
            # only the Omega-part of F is visible to a FOL-formula
            free = sorted((i - e) & self.omega_atoms)
        else:
            free = sorted(i - e)
        if len(free) > self.max_upto_atoms:
            raise ResourceLimitError("up-to satisfaction", len(free), self.max_upto_atoms)
        for bits in itertools.product((False, True), repeat=len(free)):
            f = e | {a for a, b in zip(free, bits) if b}
            if self.holds(f, elem) == elem.negated:
                return False
        return True

    def tcal_fixpoint(self, i: Iterable[Atom]) -> frozenset[Atom]:
        """Least fixpoint of ``E -> {head(r) | (E, I) up-to satisfies body(r)}``."""
        i = self._total(i)
        e: frozenset[Atom] = frozenset()
        while True:
            nxt = frozenset(r.head for r in self.kb.rules
                            if all(self.up_to_satisfies(e, i, b) for b in r.body))
            if not nxt <= i:
                outside = ", ".join(map(str, sorted(nxt - i)))
                raise ValueError(f"derived atoms outside the interpretation (not a model): {outside}")
            if nxt == e:
                return e
            e = nxt

    def is_well_supported_answer_set(self, i: Iterable[Atom]) -> bool:
        i = self._total(i)
        if not self.is_model(i):
            return False
        t = self.tcal_fixpoint(i)
        view = self.omega_view(t, self.complement(i))
        return all(a in t or self.entailer.entails(view, a) for a in sorted(i))

    def enumerate(self) -> list[frozenset[Atom]]:
        n = len(self.hb)
        if n > self.max_enum_atoms:
            raise ResourceLimitError("answer set enumeration", n, self.max_enum_atoms)
        found = []
        for k in range(n + 1):
            for combo in itertools.combinations(self.hb, k):
                if self.is_well_supported_answer_set(combo):
                    found.append(frozenset(combo))
        return sorted(found, key=lambda s: sorted(s))


@functools.lru_cache(maxsize=32)
def _solver(kb: KnowledgeBase, max_enum_atoms: int = DEFAULT_MAX_ENUM_ATOMS) -> AnswerSetSolver:
    return AnswerSetSolver(ground_program(kb), max_enum_atoms=max_enum_atoms)


def satisfies_two_valued(kb: KnowledgeBase, i: Iterable[Atom], elem: BodyElem) -> bool:
    return _solver(kb).satisfies_two_valued(i, elem)


def is_model(kb: KnowledgeBase, i: Iterable[Atom]) -> bool:
    return _solver(kb).is_model(i)


def up_to_satisfies(kb: KnowledgeBase, e: Iterable[Atom], i: Iterable[Atom], elem: BodyElem, *,
                    shortcuts: bool = True) -> bool:
    return _solver(kb).up_to_satisfies(e, i, elem, shortcuts=shortcuts)


def tcal_fixpoint(kb: KnowledgeBase, i: Iterable[Atom]) -> frozenset[Atom]:
    return _solver(kb).tcal_fixpoint(i)


def is_well_supported_answer_set(kb: KnowledgeBase, i: Iterable[Atom]) -> bool:
    return _solver(kb).is_well_supported_answer_set(i)


def enumerate_answer_sets(kb: KnowledgeBase, *, max_enum_atoms: int = DEFAULT_MAX_ENUM_ATOMS) -> list[frozenset[Atom]]:
    return _solver(kb, max_enum_atoms).enumerate()
