"""Compilation of grammar expressions to automata.

Macros are expanded call-by-name: arguments are substituted as syntax, so a
macro parameter can stand for a type formula (``prefinal_V(('E';'@'), ...)``)
or for a regular expression (``seek(X)``) alike.  Every compiled result is
normalized and cached per symbol space.
"""

from __future__ import annotations

import warnings

from . import enrich, fsa
from .alphabet import SymbolSpace, denote
from .syntax import (And, Call, Concat, Definition, Node, Not, Option, Or, Plus, Rule, Star,
                     Str, Sym, Union, parse_expression, parse_grammar, substitute)


class GrammarError(ValueError):
    pass


class UnknownMacro(GrammarError):
    pass


class CyclicMacro(GrammarError):
    pass


# characters whose vowel alternates between an inner and an outer quality
ALTERNATING = {"@": "E", "e": "i", "o": "u"}

BUILTINS = {
    "producer": 1, "consumer": 1, "ignore": 2, "add_repeats": 1, "add_skips": 1,
    "add_self_loops": 1, "add_self_loop_before": 2, "closed_interpretation": 1,
    "stringToSegments": 1, "string_to_segments": 1, "unmark": 1, "optimize": 1,
    "sonority_differences": 0,
}


class MacroEnv:
    """Macro definitions keyed by name and arity; redefinition is an error."""

    def __init__(self, definitions=()):
        self._defs: dict[tuple[str, int], Definition] = {}
        for d in definitions:
            self.define(d)

    def define(self, d: Definition, replace: bool = False) -> None:
        key = (d.name, len(d.params))
        if d.name in BUILTINS:
            raise GrammarError(f"{d.name} is a built-in operator and cannot be redefined")
        if key in self._defs and not replace:
            raise GrammarError(f"macro {d.name}/{len(d.params)} is already defined")
        self._defs[key] = d

    def load(self, text: str) -> "MacroEnv":
        for d in parse_grammar(text):
            self.define(d)
        return self

    def lookup(self, name: str, arity: int) -> Definition | None:
        return self._defs.get((name, arity))

    def __contains__(self, key):
        return key in self._defs

    def names(self) -> list[str]:
        return sorted({n for n, _ in self._defs})

    def copy(self) -> "MacroEnv":
        env = MacroEnv()
        env._defs = dict(self._defs)
        return env


class Compiler:
    def __init__(self, env: MacroEnv, space: SymbolSpace, optimize: bool = True):
        self.env = env
        self.space = space
        self.optimize = optimize
        self._cache: dict = {}
        self._active: list[str] = []

    # --- entry points --------------------------------------------------

    def compile(self, node, space: SymbolSpace | None = None) -> fsa.Automaton:
        if isinstance(node, str):
            node = parse_expression(node)
        space = space or self.space
        key = (node, id(space))
        hit = self._cache.get(key)
        if hit is None:
            hit = fsa.normalize(self._compile(node, space))
            self._cache[key] = hit
        return hit

    def denote(self, node, space: SymbolSpace | None = None) -> int:
        if isinstance(node, str):
            node = parse_expression(node)
        return denote(self._resolve_type(node), space or self.space)

    # --- internals -----------------------------------------------------

    def _resolve_type(self, node):
        # zero-arity macros may name type formulas, e.g. ``vowels := (a;i;u).``
        if isinstance(node, Sym) and (node.name, 0) in self.env:
            return self._resolve_type(self.env.lookup(node.name, 0).body)
        if isinstance(node, (And, Or)):
            return type(node)(tuple(self._resolve_type(i) for i in node.items))
        if isinstance(node, Not):
            return Not(self._resolve_type(node.expr))
        return node

    def _compile(self, node: Node, space: SymbolSpace) -> fsa.Automaton:
        c = lambda n: self.compile(n, space)  # noqa: E731
        if isinstance(node, Concat):
            if not node.items:
                return fsa.epsilon(space)
            return fsa.concat(*map(c, node.items))
        if isinstance(node, Union):
            if not node.items:
                return fsa.empty(space)
            return fsa.union(*map(c, node.items))
        if isinstance(node, Star):
            return fsa.star(c(node.expr))
        if isinstance(node, Plus):
            return fsa.plus(c(node.expr))
        if isinstance(node, Option):
            return fsa.option(c(node.expr))
        if isinstance(node, And):
            result = c(node.items[0])
            for item in node.items[1:]:
                result = fsa.normalize(fsa.intersect_open(result, c(item)))
            return result
        if isinstance(node, Rule):
            return rule_automaton(space, node.direction, self.denote(node.focus, space),
                                  self.denote(node.target, space), self.denote(node.context, space))
        if isinstance(node, Sym):
            return self._call(node.name, (), space)
        if isinstance(node, Call):
            return self._call(node.name, node.args, space)
        if isinstance(node, (Or, Not)):
            raise GrammarError(f"type operator outside producer/consumer: {node}")
        if isinstance(node, Str):
            raise GrammarError(f"string literal {node} outside stringToSegments")
        raise GrammarError(f"cannot compile {node!r}")

    def _call(self, name: str, args: tuple, space: SymbolSpace) -> fsa.Automaton:
        d = self.env.lookup(name, len(args))
        if d is not None:
            if name in self._active:
                raise CyclicMacro(f"recursive macro: {' -> '.join(self._active + [name])}")
            self._active.append(name)
            try:
                return self.compile(substitute(d.body, dict(zip(d.params, args))), space)
            finally:
                self._active.pop()
        if name in BUILTINS:
            if BUILTINS[name] != len(args):
                raise GrammarError(f"{name} takes {BUILTINS[name]} argument(s), got {len(args)}")
            return self._builtin(name, args, space)
        if any(n == name for n in self.env.names()):
            raise UnknownMacro(f"no macro {name} with {len(args)} argument(s)")
        raise UnknownMacro(f"unknown macro {name!r}")

    def _builtin(self, name, args, space):
        c = lambda n: self.compile(n, space)  # noqa: E731
        if name in ("producer", "consumer"):
            return fsa.atom(space, self.denote(args[0], space), producer=name == "producer")
        if name == "ignore":
            return fsa.ignore(c(args[0]), c(args[1]))
        if name == "add_repeats":
            return enrich.add_repeats(c(args[0]))
        if name == "add_skips":
            return enrich.add_skips(c(args[0]))
        if name == "add_self_loops":
            return enrich.add_self_loops(c(args[0]))
        if name == "add_self_loop_before":
            return enrich.add_self_loop_before(self.denote(args[0], space), c(args[1]))
        if name == "closed_interpretation":
            return fsa.closed_interpretation(c(args[0]))
        if name in ("stringToSegments", "string_to_segments"):
            if not isinstance(args[0], Str):
                raise GrammarError(f"{name} expects a string literal")
            return c(string_to_segments(args[0].text, space))
        if name == "unmark":
            twin = space.marked_twin()
            inner = self.compile(args[0], twin)
            return fsa.map_labels(inner, twin.unmark_bits, space.base)
        if name == "optimize":
            inner = c(args[0])
            if not self.optimize:
                return inner
            from .optimize import bounded_local_optimization
            return bounded_local_optimization(inner)
        if name == "sonority_differences":
            from .prosody import sonority_differences
            return sonority_differences(space)
        raise AssertionError(name)


def compile(node, env: MacroEnv, space: SymbolSpace) -> fsa.Automaton:  # noqa: A001
    return Compiler(env, space).compile(node)


# --- monotonic rules -----------------------------------------------------------------

def rule_automaton(space: SymbolSpace, direction: str, focus: int, target: int, context: int) -> fsa.Automaton:
    """Constraint that a focus segment adjacent to ``context`` satisfies ``target``.

    Compiled as the all-consumer complement of the factor ``(focus & ~target)
    context`` (``context (focus & ~target)`` for left rules), where adjacency
    is between segmental positions; technical symbols are transparent.
    """
    seg = space.segment_mask
    if focus & seg and not focus & target & seg:
        warnings.warn("monotonic rule target excludes every focus symbol", stacklevel=2)
    bad = focus & ~target & seg
    ctx = context & seg
    if direction == "r":
        first, second = bad, ctx
    elif direction == "l":
        first, second = ctx, bad
    else:
        raise GrammarError(f"rule direction must be 'r' or 'l', not {direction!r}")
    tech = space.technical_mask
    trans = []
    for state in (0, 1):
        allowed = seg & ~second if state == 1 else seg
        for bits, dst in ((allowed & first, 1), (allowed & ~first, 0)):
            if bits:
                trans.append((state, bits, False, dst))
        trans.append((state, tech, False, state))
    return fsa.Automaton(space, 2, 0, frozenset({0, 1}), tuple(trans))


# --- constructors for grammar fragments ----------------------------------------------

def _t(formula) -> Node:
    return parse_expression(formula) if isinstance(formula, str) else formula


def _x(expr) -> Node:
    return parse_expression(expr) if isinstance(expr, str) else expr


def producer(formula) -> Node:
    return Call("producer", (_t(formula),))


def consumer(formula) -> Node:
    return Call("consumer", (_t(formula),))


def seek(x) -> Node:
    """Move ambiguously left (repeat*) or right (skip*), then match ``x``."""
    return Concat((Union((Star(producer("skip")), Star(producer("repeat")))), _x(x)))


def skip_to(x) -> Node:
    return Concat((Plus(producer("skip")), _x(x)))


def align_left(x) -> Node:
    return Concat((_x(x), Star(consumer("anything"))))


def align_right(x) -> Node:
    return Concat((Star(consumer("anything")), _x(x)))


def align(x) -> Node:
    return align_right(align_left(x))


def default(optional, common) -> Node:
    common = _t(common)
    return Union((producer(And((common, _t(optional)))), consumer(common)))


def rule_r(focus, target, context) -> Node:
    return Rule("r", _t(focus), _t(target), _t(context))


def rule_l(focus, target, context) -> Node:
    return Rule("l", _t(focus), _t(target), _t(context))


def string_to_segments(text: str, space: SymbolSpace | None = None) -> Node:
    """Producer segments spelled by ``text``; inner vowels alternate with outer ones."""
    items = []
    for ch in text:
        if space is not None and ch not in space.phonemes:
            raise GrammarError(f"no phoneme {ch!r} in the inventory")
        if ch in ALTERNATING and (space is None or ALTERNATING[ch] in space.phonemes):
            items.append(producer(Or((Sym(ch), Sym(ALTERNATING[ch])))))
        else:
            items.append(producer(Sym(ch)))
    if len(items) == 1:
        return items[0]
    return Concat(tuple(items))
