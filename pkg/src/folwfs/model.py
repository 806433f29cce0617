"""Data model for FOL-programs: terms, formulas, rules, literal sets, results.

A knowledge base pairs a first-order theory ``L`` with a rule base ``Pi``.
Rule predicates (``Phi_P``) that are shared with the theory form ``Omega``;
everything here is immutable and hashable so values can be cached freely.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import GroundingError, SignatureError


class HerbrandWarning(UserWarning):
    """A declared rule predicate does not occur anywhere in the knowledge base."""


@dataclass(frozen=True, order=True)
class Term:
    name: str
    variable: bool = False

    @property
    def kind(self) -> str:
        return "variable" if self.variable else "constant"

    def __str__(self) -> str:
        return self.name


def const(name: str) -> Term:
    return Term(name)


def var(name: str) -> Term:
    return Term(name, variable=True)


@dataclass(frozen=True, order=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return not any(t.variable for t in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(t.name for t in self.args)})"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self) -> str:
        return f"~{self.body}"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(" + " & ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(" + " | ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} <-> {self.right})"


@dataclass(frozen=True)
class Forall:
    variable: str
    body: "Formula"

    def __str__(self) -> str:
        return f"(forall {self.variable}. {self.body})"


@dataclass(frozen=True)
class Exists:
    variable: str
    body: "Formula"

    def __str__(self) -> str:
        return f"(exists {self.variable}. {self.body})"


Formula = Union[Atom, Not, And, Or, Implies, Iff, Forall, Exists]
Quantifier = (Forall, Exists)


def conj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, (Not, Forall, Exists)):
        return (f.body,)
    if isinstance(f, (And, Or)):
        return f.parts
    return (f.left, f.right)


def atoms_of(f: Formula) -> Iterator[Atom]:
    """Atoms occurring in ``f``, in left-to-right order (may repeat)."""
    if isinstance(f, Atom):
        yield f
        return
    for c in children(f):
        yield from atoms_of(c)


def predicates_of(f: Formula) -> set[str]:
    return {a.predicate for a in atoms_of(f)}


def free_variables(f: Formula, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(f, Atom):
        return {t.name for t in f.args if t.variable and t.name not in bound}
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body, bound | {f.variable})
    out: set[str] = set()
    for c in children(f):
        out |= free_variables(c, bound)
    return out


def substitute(f: Formula, binding: Mapping[str, Term]) -> Formula:
    """Replace free variables according to ``binding``; bound ones are left alone."""
    if not binding:
        return f
    if isinstance(f, Atom):
        if not any(t.variable and t.name in binding for t in f.args):
            return f
        return Atom(f.predicate, tuple(binding.get(t.name, t) if t.variable else t for t in f.args))
    if isinstance(f, Not):
        return Not(substitute(f.body, binding))
    if isinstance(f, And):
        return And(tuple(substitute(p, binding) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(substitute(p, binding) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, binding), substitute(f.right, binding))
    if isinstance(f, Iff):
        return Iff(substitute(f.left, binding), substitute(f.right, binding))
    inner = {k: v for k, v in binding.items() if k != f.variable}
    return type(f)(f.variable, substitute(f.body, inner))


class ElemKind(str, Enum):
    ORDINARY = "ordinary"
    FOL = "fol"


def classify(formula: Formula, omega: Iterable[str], rule_predicates: Iterable[str] | None = None) -> ElemKind:
    """Ordinary iff ``formula`` is a bare atom over a rule predicate outside Omega.

    ``rule_predicates`` defaults to "every predicate", which is the right reading
    for pure rule bases; atoms over theory-only predicates are FOL-formulas.
    """
    if not isinstance(formula, Atom):
        return ElemKind.FOL
    if formula.predicate in set(omega):
        return ElemKind.FOL
    if rule_predicates is not None and formula.predicate not in set(rule_predicates):
        return ElemKind.FOL
    return ElemKind.ORDINARY


@dataclass(frozen=True)
class BodyElem:
    formula: Formula
    negated: bool = False
    kind: ElemKind = ElemKind.ORDINARY

    @property
    def polarity(self) -> str:
        return "negative" if self.negated else "positive"

    @property
    def ordinary(self) -> bool:
        return self.kind is ElemKind.ORDINARY

    def __str__(self) -> str:
        text = str(self.formula)
        return f"not {text}" if self.negated else text


@dataclass(frozen=True)
class Rule:
    head: Atom
    pos: tuple[BodyElem, ...] = ()
    neg: tuple[BodyElem, ...] = ()

    @property
    def body(self) -> tuple[BodyElem, ...]:
        return self.pos + self.neg

    def variables(self) -> set[str]:
        out = {t.name for t in self.head.args if t.variable}
        for e in self.body:
            out |= free_variables(e.formula)
        return out

    @property
    def is_ground(self) -> bool:
        return not self.variables()

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


@dataclass(frozen=True)
class Signature:
    predicates: Mapping[str, int]
    constants: tuple[str, ...]
    rule_predicates: frozenset[str]
    omega: frozenset[str]

    def __post_init__(self) -> None:
        if not self.constants:
            raise SignatureError("the constant set must be nonempty")
        if len(set(self.constants)) != len(self.constants):
            raise SignatureError("duplicate constants")
        if not self.omega <= self.rule_predicates:
            extra = ", ".join(sorted(self.omega - self.rule_predicates))
            raise SignatureError(f"Omega predicates not among the rule predicates: {extra}")
        if not self.rule_predicates <= set(self.predicates):
            extra = ", ".join(sorted(self.rule_predicates - set(self.predicates)))
            raise SignatureError(f"rule predicates without a declared arity: {extra}")
        # canonical forms keep equality and hashing structural
        object.__setattr__(self, "predicates", _FrozenDict(sorted(self.predicates.items())))
        object.__setattr__(self, "constants", tuple(sorted(self.constants)))

    def arity(self, predicate: str) -> int:
        return self.predicates[predicate]


class _FrozenDict(dict):
    def __hash__(self) -> int:  # type: ignore[override]
        return hash(tuple(sorted(self.items())))

    def _blocked(self, *args, **kwargs):
        raise TypeError("signature predicate map is immutable")

    __setitem__ = __delitem__ = update = pop = popitem = clear = setdefault = _blocked


@dataclass(frozen=True)
class KnowledgeBase:
    theory: tuple[Formula, ...]
    rules: tuple[Rule, ...]
    signature: Signature

    def __post_init__(self) -> None:
        object.__setattr__(self, "theory", tuple(self.theory))
        object.__setattr__(self, "rules", tuple(self.rules))
        _check_arities(self)

    @property
    def omega(self) -> frozenset[str]:
        return self.signature.omega

    @property
    def constants(self) -> tuple[str, ...]:
        return self.signature.constants

    @property
    def is_ground(self) -> bool:
        return all(r.is_ground for r in self.rules)

    @cached_property
    def occurring_predicates(self) -> frozenset[str]:
        preds: set[str] = set()
        for f in self.theory:
            preds |= predicates_of(f)
        for r in self.rules:
            preds.add(r.head.predicate)
            for e in r.body:
                preds |= predicates_of(e.formula)
        return frozenset(preds)

    @cached_property
    def herbrand_base(self) -> tuple[Atom, ...]:
        return herbrand_base(self)

    @cached_property
    def omega_atoms(self) -> tuple[Atom, ...]:
        return tuple(a for a in self.herbrand_base if a.predicate in self.omega)

    def in_omega(self, atom: Atom) -> bool:
        return atom.predicate in self.omega

    def rules_for(self, head: Atom) -> tuple[Rule, ...]:
        return self._rules_by_head.get(head, ())

    @cached_property
    def _rules_by_head(self) -> dict[Atom, tuple[Rule, ...]]:
        out: dict[Atom, list[Rule]] = {}
        for r in self.rules:
            out.setdefault(r.head, []).append(r)
        return {k: tuple(v) for k, v in out.items()}

    def literal_universe(self) -> "LiteralSet":
        """``Lit_Pi``: every atom of the Herbrand base with both signs."""
        hb = frozenset(self.herbrand_base)
        return LiteralSet(hb, hb)


def _check_arities(kb: KnowledgeBase) -> None:
    sig = kb.signature
    consts = set(sig.constants)

    def check(a: Atom) -> None:
        if a.predicate not in sig.predicates:
            raise SignatureError(f"predicate {a.predicate} has no declared arity")
        if sig.predicates[a.predicate] != a.arity:
            raise SignatureError(
                f"{a}: predicate {a.predicate} has arity {sig.predicates[a.predicate]}, used with {a.arity}")
        for t in a.args:
            if not t.variable and t.name not in consts:
                raise SignatureError(f"{a}: constant {t.name} is not declared")

    for f in kb.theory:
        for a in atoms_of(f):
            check(a)
    for r in kb.rules:
        if r.head.predicate not in sig.rule_predicates:
            raise SignatureError(f"rule head {r.head} is not over a rule predicate")
        check(r.head)
        for e in r.body:
            for a in atoms_of(e.formula):
                check(a)


def herbrand_base(kb: KnowledgeBase) -> tuple[Atom, ...]:
    """Ground atoms over the rule predicates that occur in the knowledge base, sorted."""
    sig = kb.signature
    occurring = kb.occurring_predicates
    missing = sorted(sig.rule_predicates - occurring)
    if missing:
        warnings.warn(f"rule predicates not occurring in the knowledge base: {', '.join(missing)}",
                      HerbrandWarning, stacklevel=2)
    consts = [Term(c) for c in sig.constants]
    out = []
    for p in sorted(sig.rule_predicates & occurring):
        for args in itertools.product(consts, repeat=sig.arity(p)):
            out.append(Atom(p, tuple(args)))
    return tuple(out)


def ground_program(kb: KnowledgeBase) -> KnowledgeBase:
    """Instantiate every rule over the constant set; the theory is left unchanged."""
    if kb.is_ground:
        return kb
    consts = [Term(c) for c in kb.signature.constants]
    rules: list[Rule] = []
    seen: set[Rule] = set()
    for r in kb.rules:
        names = sorted(r.variables())
        for combo in itertools.product(consts, repeat=len(names)):
            binding = dict(zip(names, combo))
            g = Rule(
                substitute(r.head, binding),  # type: ignore[arg-type]
                tuple(replace(e, formula=substitute(e.formula, binding)) for e in r.pos),
                tuple(replace(e, formula=substitute(e.formula, binding)) for e in r.neg),
            )
            if g not in seen:
                seen.add(g)
                rules.append(g)
    out = KnowledgeBase(kb.theory, tuple(rules), kb.signature)
    if not out.is_ground:
        raise GroundingError("grounding left free variables in a rule")
    return out


def make_rule(head: Atom, pos: Sequence[Formula] = (), neg: Sequence[Formula] = (), *,
              omega: Iterable[str] = (), rule_predicates: Iterable[str] | None = None) -> Rule:
    """Build a rule, classifying every body formula against ``omega``."""
    omega = frozenset(omega)
    rp = None if rule_predicates is None else frozenset(rule_predicates)
    return Rule(
        head,
        tuple(BodyElem(f, False, classify(f, omega, rp)) for f in pos),
        tuple(BodyElem(f, True, classify(f, omega, rp)) for f in neg),
    )


def reclassify(kb: KnowledgeBase) -> KnowledgeBase:
    """Recompute the ordinary/FOL tag of every body element from the signature."""
    sig = kb.signature

    def fix(e: BodyElem) -> BodyElem:
        return replace(e, kind=classify(e.formula, sig.omega, sig.rule_predicates))

    rules = tuple(Rule(r.head, tuple(map(fix, r.pos)), tuple(map(fix, r.neg))) for r in kb.rules)
    return KnowledgeBase(kb.theory, rules, sig)


@dataclass(frozen=True)
class LiteralSet:
    """A set of signed ground atoms: ``positives`` are ``A``, ``negatives`` are ``~A``."""

    positives: frozenset[Atom] = frozenset()
    negatives: frozenset[Atom] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "positives", frozenset(self.positives))
        object.__setattr__(self, "negatives", frozenset(self.negatives))

    @classmethod
    def from_literals(cls, lits: Iterable[tuple[Atom, bool]]) -> "LiteralSet":
        pos, neg = set(), set()
        for a, sign in lits:
            (pos if sign else neg).add(a)
        return cls(frozenset(pos), frozenset(neg))

    @classmethod
    def negated(cls, atoms: Iterable[Atom]) -> "LiteralSet":
        """``~.Q`` for a set of atoms ``Q``."""
        return cls(frozenset(), frozenset(atoms))

    @classmethod
    def of_atoms(cls, atoms: Iterable[Atom]) -> "LiteralSet":
        return cls(frozenset(atoms), frozenset())

    def consistent(self) -> bool:
        return self.positives.isdisjoint(self.negatives)

    def project(self, omega: Iterable[str]) -> "LiteralSet":
        om = frozenset(omega)
        return LiteralSet(frozenset(a for a in self.positives if a.predicate in om),
                          frozenset(a for a in self.negatives if a.predicate in om))

    def literals(self) -> list[tuple[Atom, bool]]:
        """Sorted ``(atom, sign)`` pairs; negative before positive for one atom."""
        return sorted([(a, True) for a in self.positives] + [(a, False) for a in self.negatives])

    def atoms(self) -> frozenset[Atom]:
        return self.positives | self.negatives

    def __or__(self, other: "LiteralSet") -> "LiteralSet":
        return LiteralSet(self.positives | other.positives, self.negatives | other.negatives)

    def __le__(self, other: "LiteralSet") -> bool:
        return self.positives <= other.positives and self.negatives <= other.negatives

    def __len__(self) -> int:
        return len(self.positives) + len(self.negatives)

    def __iter__(self) -> Iterator[tuple[Atom, bool]]:
        return iter(self.literals())

    def __contains__(self, lit: tuple[Atom, bool]) -> bool:
        a, sign = lit
        return a in (self.positives if sign else self.negatives)

    def __str__(self) -> str:
        return "{" + ", ".join(format_literal(a, s) for a, s in self.literals()) + "}"


def format_literal(atom: Atom, sign: bool) -> str:
    return str(atom) if sign else f"~{atom}"


class Label(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNDEFINED = "undefined"
    # only in inconsistent results, where the fixpoint is all of Lit_Pi
    BOTH = "both"


@dataclass(frozen=True)
class SemanticsResult:
    labels: Mapping[Atom, Label]
    inconsistent: bool
    trace: tuple[LiteralSet, ...] = field(default=())

    @property
    def fixpoint(self) -> LiteralSet:
        return self.trace[-1] if self.trace else LiteralSet()

    @property
    def iterations(self) -> int:
        return max(len(self.trace) - 1, 0)

    def atoms_with(self, label: Label) -> list[Atom]:
        return sorted(a for a, l in self.labels.items() if l is label)


def label_atoms(hb: Iterable[Atom], lits: LiteralSet) -> dict[Atom, Label]:
    out = {}
    for a in sorted(hb):
        p, n = a in lits.positives, a in lits.negatives
        out[a] = Label.BOTH if p and n else Label.TRUE if p else Label.FALSE if n else Label.UNDEFINED
    return out
