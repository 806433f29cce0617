"""Text and JSON renderings of a semantics result, plus the JSON reader."""

from __future__ import annotations

import json
from typing import Any

from .model import Atom, Label, LiteralSet, SemanticsResult, format_literal
from .parser import parse_literals


def _names(atoms: list[Atom]) -> str:
    return ", ".join(map(str, atoms)) if atoms else "(none)"


def render_literals(s: LiteralSet) -> str:
    return "{" + ", ".join(format_literal(a, sign) for a, sign in s.literals()) + "}"


def render_text(result: SemanticsResult, *, trace: bool = False) -> str:
    lines = []
    if trace:
        lines += [f"W^{k} = {render_literals(s)}" for k, s in enumerate(result.trace)]
    if result.inconsistent:
        lines.append("INCONSISTENT (lfp = Lit_Pi)")
    else:
        lines.append(f"true: {_names(result.atoms_with(Label.TRUE))}; "
                     f"false: {_names(result.atoms_with(Label.FALSE))}; "
                     f"undefined: {_names(result.atoms_with(Label.UNDEFINED))}")
    return "\n".join(lines)


def to_json_obj(result: SemanticsResult) -> dict[str, Any]:
    return {
        "atoms": {str(a): result.labels[a].value for a in sorted(result.labels)},
        "inconsistent": result.inconsistent,
        "iterations": result.iterations,
        "trace": [[format_literal(a, s) for a, s in w.literals()] for w in result.trace],
    }


def render_json(result: SemanticsResult) -> str:
    return json.dumps(to_json_obj(result), sort_keys=False)


def render(result: SemanticsResult, format: str = "text", *, trace: bool = False) -> str:
    if format == "text":
        return render_text(result, trace=trace)
    if format == "json":
        return render_json(result)
    raise ValueError(f"unknown format {format!r}")


def result_from_json(text: str) -> SemanticsResult:
    """Inverse of :func:`render_json`."""
    obj = json.loads(text)
    labels = {}
    for name, lab in obj["atoms"].items():
        (atom,) = parse_literals(name).positives
        labels[atom] = Label(lab)
    trace = tuple(parse_literals(", ".join(step)) for step in obj["trace"])
    return SemanticsResult(labels, bool(obj["inconsistent"]), trace)
