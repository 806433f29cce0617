"""Well-founded semantics and well-supported answer sets for FOL-programs.

A knowledge base combines a first-order theory with a rule base whose bodies
may contain first-order formulas; entailment is decided over the finite
domain of declared constants.
"""

from .answersets import (AnswerSetSolver, enumerate_answer_sets, is_model, is_well_supported_answer_set,
                         satisfies_two_valued, tcal_fixpoint, up_to_satisfies)
from .entailment import Entailer, consistent_with, entails, forall_extensions_fail, propositionalize, satisfiable
from .errors import FolkbError, GroundingError, ParseError, ResourceLimitError, SignatureError
from .model import (And, Atom, BodyElem, ElemKind, Exists, Forall, Iff, Implies, KnowledgeBase, Label, LiteralSet,
                    Not, Or, Rule, SemanticsResult, Signature, Term, classify, ground_program, herbrand_base)
from .parser import parse, parse_file, parse_formula, parse_literals, to_source
from .render import render, render_json, render_text, result_from_json
from .wfs import (Engine, greatest_unfounded_set, is_unfounded_set, t_consequences, w_step, wfs,
                  z_consequences)

__version__ = "0.1.0"

__all__ = [
    "And", "AnswerSetSolver", "Atom", "BodyElem", "ElemKind", "Engine", "Entailer", "Exists", "FolkbError",
    "Forall", "GroundingError", "Iff", "Implies", "KnowledgeBase", "Label", "LiteralSet", "Not", "Or",
    "ParseError", "ResourceLimitError", "Rule", "SemanticsResult", "Signature", "SignatureError", "Term",
    "classify", "consistent_with", "entails", "enumerate_answer_sets", "forall_extensions_fail",
    "greatest_unfounded_set", "ground_program", "herbrand_base", "is_model", "is_unfounded_set",
    "is_well_supported_answer_set", "parse", "parse_file", "parse_formula", "parse_literals", "propositionalize",
    "render", "render_json", "render_text", "result_from_json", "satisfiable", "satisfies_two_valued",
    "t_consequences", "tcal_fixpoint", "to_source", "up_to_satisfies", "w_step", "wfs", "z_consequences",
]
