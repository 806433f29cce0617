"""Reader and writer for the ``.folkb`` text format.

```
#predicates A/1, B/1, R/1.   % optional: declares the rule predicates
#constants a.                 % required, nonempty
#omega A, B.                  % predicates shared with the theory
#theory
forall X. (B(X) -> A(X)).
#rules
R(a) :- not C(a), not A(a).
```

Identifiers in argument position are variables when they start with an
uppercase letter and constants otherwise.  Inside formulas ``~ & | -> <->``
bind in that order (tightest first); quantifiers extend as far right as
possible.  Compound body formulas must be parenthesized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ParseError, SignatureError
from .model import (And, Atom, BodyElem, Exists, Forall, Formula, Iff, Implies, KnowledgeBase, LiteralSet, Not, Or,
                    Rule, Signature, Term, atoms_of, classify, free_variables)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<directive>\#[A-Za-z_]\w*)
  | (?P<iff><->)
  | (?P<implies>->)
  | (?P<neck>:-)
  | (?P<ident>[A-Za-z_]\w*|\d+)
  | (?P<punct>[()~&|,./])
""", re.VERBOSE)

KEYWORDS = {"forall", "exists", "not"}
DIRECTIVES = {"#predicates", "#constants", "#omega", "#theory", "#rules"}


@dataclass(frozen=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


def tokenize(text: str, source: str = "<string>") -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = m.lastgroup
        span = Span(line, pos - line_start + 1)
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = word
            elif kind == "punct":
                kind = word
            out.append(Token(kind, word, span))
        pos = m.end()
    out.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return out


@dataclass(frozen=True)
class RawTerm:
    name: str
    span: Span

    @property
    def variable(self) -> bool:
        return self.name[0].isupper() or self.name[0] == "_"


@dataclass
class SourceDocument:
    """Everything read from one file, with the position of every construct."""

    source: str = "<string>"
    predicates: list[tuple[str, int, Span]] = field(default_factory=list)
    constants: list[tuple[str, Span]] = field(default_factory=list)
    omega: list[tuple[str, Span]] = field(default_factory=list)
    theory: list[tuple[Formula, Span]] = field(default_factory=list)
    rules: list[tuple[Atom, list[tuple[Formula, bool, Span]], Span]] = field(default_factory=list)
    atom_spans: dict[int, Span] = field(default_factory=dict)
    has_predicates: bool = False
    has_constants: bool = False


class _Parser:
    def __init__(self, text: str, source: str):
        self.source = source
        self.toks = tokenize(text, source)
        self.i = 0
        self.doc = SourceDocument(source)
        # spans of every Atom object built, keyed by id() so duplicates keep their own
        self._keep: list[Atom] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, span: Span | None = None) -> ParseError:
        span = span or self.tok.span
        return ParseError(msg, span.line, span.column, self.source)

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what or repr(kind)}, found {found!r}")
        return self.next()

    # document
    def document(self) -> SourceDocument:
        section = None
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "directive":
                if t.text not in DIRECTIVES:
                    raise self.error(f"unknown section {t.text}")
                self.next()
                if t.text == "#predicates":
                    self.doc.has_predicates = True
                    self.predicate_list()
                elif t.text == "#constants":
                    self.doc.has_constants = True
                    self.doc.constants += self.name_list()
                elif t.text == "#omega":
                    self.doc.omega += self.name_list()
                else:
                    section = t.text
                continue
            if section == "#theory":
                f = self.formula(frozenset())
                self.expect(".", "'.' after sentence")
                self.doc.theory.append((f, t.span))
            elif section == "#rules":
                self.rule()
            else:
                raise self.error("statement outside a #theory or #rules section")
        return self.doc

    def _list(self, item) -> list:
        out = []
        if self.accept("."):
            return out
        while True:
            out.append(item())
            if self.accept("."):
                return out
            self.expect(",", "',' or '.'")

    def name_list(self) -> list[tuple[str, Span]]:
        def item():
            t = self.expect("ident", "a name")
            return t.text, t.span
        return self._list(item)

    def predicate_list(self) -> None:
        def item():
            t = self.expect("ident", "a predicate name")
            self.expect("/", "'/' and an arity")
            n = self.expect("ident", "an arity")
            if not n.text.isdigit():
                raise self.error(f"arity must be a number, found {n.text!r}", n.span)
            return t.text, int(n.text), t.span
        self.doc.predicates += self._list(item)

    # formulas
    def formula(self, bound: frozenset[str]) -> Formula:
        left = self.implication(bound)
        if self.accept("iff"):
            return Iff(left, self.formula(bound))
        return left

    def implication(self, bound: frozenset[str]) -> Formula:
        left = self.disjunction(bound)
        if self.accept("implies"):
            return Implies(left, self.implication(bound))
        return left

    def disjunction(self, bound: frozenset[str]) -> Formula:
        parts = [self.conjunction(bound)]
        while self.accept("|"):
            parts.append(self.conjunction(bound))
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self, bound: frozenset[str]) -> Formula:
        parts = [self.unary(bound)]
        while self.accept("&"):
            parts.append(self.unary(bound))
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self, bound: frozenset[str]) -> Formula:
        t = self.tok
        if self.accept("~"):
            return Not(self.unary(bound))
        if t.kind in ("forall", "exists"):
            self.next()
            v = self.expect("ident", "a variable")
            if not RawTerm(v.text, v.span).variable:
                raise self.error(f"quantified variable must start with an uppercase letter: {v.text}", v.span)
            if v.text in bound:
                raise self.error(f"variable {v.text} is bound twice", v.span)
            self.expect(".", "'.' after the quantified variable")
            body = self.formula(bound | {v.text})
            return (Forall if t.kind == "forall" else Exists)(v.text, body)
        if self.accept("("):
            f = self.formula(bound)
            self.expect(")", "')'")
            return f
        return self.atom()

    def atom(self) -> Atom:
        t = self.expect("ident", "an atom")
        args: list[Term] = []
        if self.accept("("):
            while True:
                a = self.expect("ident", "a term")
                if self.tok.kind == "(":
                    raise self.error(f"function symbols are not supported: {a.text}(...)")
                raw = RawTerm(a.text, a.span)
                args.append(Term(a.text, raw.variable))
                if self.accept(")"):
                    break
                self.expect(",", "',' or ')'")
        atom = Atom(t.text, tuple(args))
        self._keep.append(atom)
        self.doc.atom_spans[id(atom)] = t.span
        return atom

    # rules
    def rule(self) -> None:
        start = self.tok
        if start.kind == "~":
            raise self.error("classical negation is not allowed in a rule head")
        if start.kind in ("(", "forall", "exists"):
            raise self.error("a rule head must be a single atom")
        head = self.atom()
        body: list[tuple[Formula, bool, Span]] = []
        if self.accept("neck"):
            while True:
                span = self.tok.span
                neg = self.accept("not") is not None
                if self.tok.kind in ("~", "forall", "exists"):
                    raise self.error("compound body formulas must be parenthesized")
                if self.accept("("):
                    f = self.formula(frozenset())
                    self.expect(")", "')'")
                else:
                    f = self.atom()
                if self.tok.kind in ("&", "|", "implies", "iff"):
                    raise self.error("compound body formulas must be parenthesized")
                body.append((f, neg, span))
                if not self.accept(","):
                    break
        elif self.tok.kind in ("&", "|", "implies", "iff"):
            raise self.error("a rule head must be a single atom")
        self.expect(".", "'.' after rule")
        self.doc.rules.append((head, body, start.span))


def parse_document(text: str, source: str = "<string>") -> SourceDocument:
    p = _Parser(text, source)
    doc = p.document()
    doc._atom_keep = p._keep  # type: ignore[attr-defined]
    return doc


def _located(source: str, span: Span, msg: str) -> ParseError:
    return ParseError(msg, span.line, span.column, source)


def resolve(doc: SourceDocument) -> KnowledgeBase:
    """Check a parsed document and build the knowledge base."""
    src = doc.source
    if not doc.has_constants:
        raise ParseError("missing #constants declaration", 1, 1, src)
    if not doc.constants:
        raise ParseError("#constants must list at least one constant", 1, 1, src)
    consts: list[str] = []
    for name, span in doc.constants:
        if not (name[0].islower() or name[0].isdigit()):
            raise _located(src, span, f"constants must start with a lowercase letter or digit: {name}")
        if name in consts:
            raise _located(src, span, f"constant {name} declared twice")
        consts.append(name)
    const_set = set(consts)

    arity: dict[str, int] = {}
    for name, n, span in doc.predicates:
        if name in arity and arity[name] != n:
            raise _located(src, span, f"predicate {name} declared with arities {arity[name]} and {n}")
        arity[name] = n

    def span_of(a: Atom, fallback: Span) -> Span:
        return doc.atom_spans.get(id(a), fallback)

    def check_atoms(f: Formula, fallback: Span) -> None:
        for a in atoms_of(f):
            sp = span_of(a, fallback)
            if a.predicate in arity and arity[a.predicate] != a.arity:
                raise _located(src, sp, f"arity mismatch: {a.predicate} has arity {arity[a.predicate]}, "
                                        f"used here with {a.arity}")
            arity.setdefault(a.predicate, a.arity)
            for t in a.args:
                if not t.variable and t.name not in const_set:
                    raise _located(src, sp, f"undeclared constant {t.name}")

    for f, span in doc.theory:
        check_atoms(f, span)
        free = free_variables(f)
        if free:
            raise _located(src, span, f"free variable(s) in theory sentence: {', '.join(sorted(free))}")
    for head, body, span in doc.rules:
        check_atoms(head, span)
        for f, _, sp in body:
            check_atoms(f, sp)

    theory_preds = set()
    for f, _ in doc.theory:
        theory_preds |= {a.predicate for a in atoms_of(f)}
    omega = set()
    for name, span in doc.omega:
        omega.add(name)
    if doc.has_predicates:
        rule_preds = {name for name, _, _ in doc.predicates}
        for name, span in doc.omega:
            if name not in rule_preds:
                raise _located(src, span, f"Omega predicate {name} is not among the declared #predicates")
        for head, _, span in doc.rules:
            if head.predicate not in rule_preds:
                raise _located(src, span_of(head, span), f"rule head predicate {head.predicate} is not declared "
                                                         "in #predicates")
    else:
        rule_preds = set(omega)
        for head, body, _ in doc.rules:
            rule_preds.add(head.predicate)
            for f, _, _ in body:
                rule_preds |= {a.predicate for a in atoms_of(f) if a.predicate not in theory_preds}
    for name, span in doc.omega:
        if name not in arity:
            raise _located(src, span, f"Omega predicate {name} never occurs and has no declared arity")

    rules = []
    for head, body, _ in doc.rules:
        pos = tuple(BodyElem(f, False, classify(f, omega, rule_preds)) for f, neg, _ in body if not neg)
        neg = tuple(BodyElem(f, True, classify(f, omega, rule_preds)) for f, neg, _ in body if neg)
        rules.append(Rule(head, pos, neg))
    try:
        sig = Signature(dict(arity), tuple(consts), frozenset(rule_preds), frozenset(omega))
        return KnowledgeBase(tuple(f for f, _ in doc.theory), tuple(rules), sig)
    except SignatureError as exc:
        raise ParseError(str(exc), 1, 1, src) from exc


def parse(text: str, source: str = "<string>") -> KnowledgeBase:
    return resolve(parse_document(text, source))


def parse_file(path: str) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), source=str(path))


# fragments parsed against an existing knowledge base -----------------------

def parse_formula(text: str, kb: KnowledgeBase | None = None) -> Formula:
    """A closed formula; atoms are checked against ``kb``'s signature when given."""
    p = _Parser(text, "<formula>")
    f = p.formula(frozenset())
    p.accept(".")
    p.expect("eof", "end of formula")
    free = free_variables(f)
    if free:
        raise ParseError(f"free variable(s): {', '.join(sorted(free))}", 1, 1, "<formula>")
    if kb is not None:
        _check_against(kb, f, p)
    return f


def _check_against(kb: KnowledgeBase, f: Formula, p: _Parser) -> None:
    sig = kb.signature
    for a in atoms_of(f):
        sp = p.doc.atom_spans.get(id(a), Span(1, 1))
        if a.predicate in sig.predicates and sig.predicates[a.predicate] != a.arity:
            raise p.error(f"arity mismatch: {a.predicate} has arity {sig.predicates[a.predicate]}", sp)
        for t in a.args:
            if not t.variable and t.name not in sig.constants:
                raise p.error(f"undeclared constant {t.name}", sp)


def parse_literals(text: str, kb: KnowledgeBase | None = None, *, allow_negative: bool = True) -> LiteralSet:
    """Comma-separated ground literals such as ``A(a), ~B(a)``."""
    p = _Parser(text, "<literals>")
    pos, neg = set(), set()
    if p.tok.kind != "eof":
        while True:
            span = p.tok.span
            sign = p.accept("~") is None
            if not sign and not allow_negative:
                raise p.error("negative literals are not allowed here", span)
            a = p.atom()
            if not a.is_ground:
                raise p.error(f"literal {a} is not ground", span)
            (pos if sign else neg).add(a)
            if not p.accept(","):
                break
    p.expect("eof", "',' or end of input")
    if kb is not None:
        for a in pos | neg:
            _check_against(kb, a, p)
    return LiteralSet(frozenset(pos), frozenset(neg))


# writer ---------------------------------------------------------------------

def _body_text(e: BodyElem) -> str:
    text = str(e.formula)
    if not isinstance(e.formula, Atom) and not text.startswith("("):
        text = f"({text})"
    return f"not {text}" if e.negated else text


def to_source(kb: KnowledgeBase) -> str:
    """Render ``kb`` in the ``.folkb`` format; parsing the result gives ``kb`` back."""
    sig = kb.signature
    lines = []
    if sig.rule_predicates:
        lines.append("#predicates " + ", ".join(f"{p}/{sig.arity(p)}" for p in sorted(sig.rule_predicates)) + ".")
    lines.append("#constants " + ", ".join(sig.constants) + ".")
    lines.append("#omega " + ", ".join(sorted(sig.omega)) + "." if sig.omega else "#omega.")
    lines.append("#theory")
    lines += [f"{f}." for f in kb.theory]
    lines.append("#rules")
    for r in kb.rules:
        # keep the original order of positive and negative elements stable: positives first
        body = [_body_text(e) for e in r.pos] + [_body_text(e) for e in r.neg]
        lines.append(f"{r.head} :- {', '.join(body)}." if body else f"{r.head}.")
    return "\n".join(lines) + "\n"


def format_atoms(atoms: Iterable[Atom]) -> str:
    return ", ".join(str(a) for a in sorted(atoms))
