"""Command-line front end: ``olpm eval``, ``olpm paradigm`` and ``olpm dot``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import fsa
from .alphabet import AlphabetError
from .combinators import GrammarError
from .export import to_dot
from .syntax import GrammarSyntaxError
from .temiar import ASPECTS, VOICES, Grammar, UnknownRoot, annotate, symbol_string, to_ipa

log = logging.getLogger("olpm")

EXIT_EMPTY = 1
EXIT_ERROR = 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--grammar", help="grammar file (.olpm); default: bundled Temiar grammar")
    p.add_argument("--lexicon", help="lexicon file; default: bundled Temiar lexicon")
    p.add_argument("--inventory", help="phoneme inventory file")
    p.add_argument("--flag", action="append", default=[], choices=["causative_b"],
                   help="enable a grammar variant")
    p.add_argument("--max-len", type=int, default=32, help="longest symbol string enumerated")
    p.add_argument("--no-optimize", action="store_true", help="skip bounded local optimization")
    p.add_argument("--allow-empty", action="store_true", help="exit 0 even for an empty result")
    p.add_argument("--ipa", action="store_true", help="print surface forms in IPA")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="olpm", description="One-Level Prosodic Morphology engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate an expression and list its forms")
    p.add_argument("expression")
    p.add_argument("--annotate", action="store_true",
                   help="also print syllabified forms and full symbol strings")

    p = sub.add_parser("paradigm", parents=[common], help="print the aspect/voice table for roots")
    p.add_argument("roots", nargs="+")

    p = sub.add_parser("dot", parents=[common], help="write the automaton of an expression as DOT")
    p.add_argument("expression")
    p.add_argument("-o", "--output", help="output path; default: stdout")
    return parser


def load_grammar(args) -> Grammar:
    return Grammar.from_files(args.grammar, args.lexicon, args.inventory,
                              optimize=not args.no_optimize, flags=tuple(args.flag))


def _render(text: str, ipa: bool) -> str:
    return to_ipa(text) if ipa else text


def cmd_eval(args, g: Grammar, out) -> bool:
    a = g.compile(args.expression)
    forms = g.surfaces(a, args.max_len)
    if not forms:
        log.warning("%s denotes the empty language", args.expression)
    for form in forms:
        print(_render(form, args.ipa), file=out)
    if args.annotate:
        if fsa.is_acyclic(a):
            # one line per label path, shown through its first symbol
            paths = [[(next(g.space.members(b)), p) for b, p in path] for path in fsa.label_paths(a)]
        else:
            paths = fsa.enumerate_strings(a, args.max_len, with_pc=True)
        for path in paths:
            print(f"{_render(annotate(g.space, path), args.ipa)}\t{symbol_string(g.space, path)}", file=out)
    return bool(forms)


def cmd_paradigm(args, g: Grammar, out) -> bool:
    unknown = [r for r in args.roots if r not in g.lexicon]
    if unknown:
        raise UnknownRoot(", ".join(unknown))
    cells = {}
    for root in args.roots:
        for cell in g.paradigm(root):
            cells[cell.voice, cell.aspect, root] = cell.surface
    print("\t".join(["voice", "aspect", *args.roots]), file=out)
    complete = True
    for voice in VOICES:
        for aspect in ASPECTS:
            row = []
            for root in args.roots:
                forms = cells[voice, aspect, root]
                complete &= bool(forms)
                row.append(",".join(_render(f, args.ipa) for f in forms) or "-")
            print("\t".join([voice, aspect, *row]), file=out)
    return complete


def cmd_dot(args, g: Grammar, out) -> bool:
    a = g.compile(args.expression)
    text = to_dot(a)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    if not a.finals:
        log.warning("%s denotes the empty language", args.expression)
    return bool(a.finals)


COMMANDS = {"eval": cmd_eval, "paradigm": cmd_paradigm, "dot": cmd_dot}


def main(argv=None, out=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        g = load_grammar(args)
        nonempty = COMMANDS[args.command](args, g, out)
    except GrammarSyntaxError as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except UnknownRoot as e:
        print(f"unknown root: {e.args[0]}", file=sys.stderr)
        return EXIT_ERROR
    except (GrammarError, AlphabetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return 0 if nonempty or args.allow_empty else EXIT_EMPTY


if __name__ == "__main__":
    sys.exit(main())
