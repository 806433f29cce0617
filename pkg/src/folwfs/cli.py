"""Command-line interface: ``folwfs {wfs,answersets,entail} FILE ...``.

Exit codes: 0 success (consistent result), 1 error, 2 inconsistent
well-founded model, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from .answersets import DEFAULT_MAX_ENUM_ATOMS, AnswerSetSolver
from .entailment import DEFAULT_MAX_EXTENSION_ATOMS, Entailer
from .errors import FolkbError, ResourceLimitError
from .model import ground_program
from .parser import format_atoms, parse_file, parse_formula, parse_literals
from .render import render
from .wfs import Engine

EXIT_OK, EXIT_ERROR, EXIT_INCONSISTENT, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("folwfs")


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for inconsistency
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgumentParser(prog="folwfs", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log solver statistics to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wfs", help="compute the well-founded semantics")
    w.add_argument("file")
    w.add_argument("--json", action="store_true", help="print the result as JSON")
    w.add_argument("--trace", action="store_true", help="print every W iterate")
    w.add_argument("--max-extension-atoms", type=int, default=DEFAULT_MAX_EXTENSION_ATOMS, metavar="N")
    w.add_argument("--dump-cnf", metavar="DIR", help="write every SAT query as DIMACS into DIR")

    a = sub.add_parser("answersets", help="enumerate or check well-supported answer sets")
    a.add_argument("file")
    a.add_argument("--check", metavar="ATOMS", help="comma-separated atoms of one interpretation to verify")
    a.add_argument("--max-enum-atoms", type=int, default=DEFAULT_MAX_ENUM_ATOMS, metavar="N")
    a.add_argument("--max-extension-atoms", type=int, default=DEFAULT_MAX_EXTENSION_ATOMS, metavar="N")
    a.add_argument("--json", action="store_true")
    a.add_argument("--dump-cnf", metavar="DIR")

    e = sub.add_parser("entail", help="decide L plus assumed literals entails FORMULA")
    e.add_argument("file")
    e.add_argument("formula")
    e.add_argument("--assume", metavar="LITS", default="", help="comma-separated literals, e.g. 'A(a), ~B(a)'")
    e.add_argument("--dump-cnf", metavar="DIR")
    return ap


def cmd_wfs(args: argparse.Namespace) -> int:
    kb = parse_file(args.file)
    engine = Engine(kb, max_extension_atoms=args.max_extension_atoms, dump_cnf=args.dump_cnf)
    result = engine.wfs()
    log.info("%d iterations, %d solver calls", result.iterations, engine.entailer.solver_calls)
    print(render(result, "json" if args.json else "text", trace=args.trace))
    return EXIT_INCONSISTENT if result.inconsistent else EXIT_OK


def _set_text(atoms) -> str:
    return "{" + format_atoms(atoms) + "}"


def cmd_answersets(args: argparse.Namespace) -> int:
    kb = ground_program(parse_file(args.file))
    engine = Engine(kb, max_extension_atoms=args.max_extension_atoms, dump_cnf=args.dump_cnf)
    solver = AnswerSetSolver(kb, max_enum_atoms=args.max_enum_atoms, engine=engine)
    if args.check is not None:
        interp = parse_literals(args.check, kb, allow_negative=False).positives
        ok = solver.is_well_supported_answer_set(interp)
        if args.json:
            print(json.dumps({"interpretation": sorted(map(str, interp)), "answer_set": ok}))
        else:
            print("answer set" if ok else "not an answer set")
        return EXIT_OK
    found = solver.enumerate()
    if args.json:
        print(json.dumps({"answer_sets": [sorted(map(str, s)) for s in found]}))
    elif not found:
        print("no answer sets")
    else:
        for s in found:
            print(_set_text(s))
    return EXIT_OK


def cmd_entail(args: argparse.Namespace) -> int:
    kb = parse_file(args.file)
    phi = parse_formula(args.formula, kb)
    assumed = parse_literals(args.assume, kb)
    ent = Entailer.for_kb(kb, dump_cnf=args.dump_cnf)
    print("true" if ent.entails(assumed.project(kb.omega), phi) else "false")
    return EXIT_OK


COMMANDS = {"wfs": cmd_wfs, "answersets": cmd_answersets, "entail": cmd_entail}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"folwfs: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FolkbError as exc:
        print(f"folwfs: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"folwfs: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
