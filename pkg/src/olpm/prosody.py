"""Syllabification, stress and surface prosodic constraints.

Most constraints are grammar macros (see ``data/temiar.olpm``); this module
adds the sonority relation they rest on and convenience accessors that
compile the named constraints from the bundled grammar.
"""

from __future__ import annotations

from functools import lru_cache

from . import fsa
from .alphabet import SymbolSpace


def sonority_differences(space: SymbolSpace) -> fsa.Automaton:
    """Tie each segment's ``up``/``down`` mark to the sonority of its successor.

    ``up`` iff sonority strictly rises to the next segment; the last segment
    is ``down``.  Only defined over a marked space: the marks are projected
    away once syllable roles have been fixed.
    """
    if not space.marked:
        raise ValueError("sonority_differences needs the marked symbol space (use unmark(...))")
    ranks = sorted({p.sonority for p in space.inventory})
    by_rank = {r: 0 for r in ranks}
    for p in space.inventory:
        by_rank[p.sonority] |= space.phoneme_mask(p.name)
    up, down = space.atom("up"), space.atom("down")

    # state 0: nothing read; otherwise (rank of previous segment, its mark)
    states = {None: 0}
    for r in ranks:
        for m in ("up", "down"):
            states[r, m] = len(states)
    trans = []
    for src, si in states.items():
        for r in ranks:
            if src is not None:
                prev_rank, prev_mark = src
                if (prev_rank < r) != (prev_mark == "up"):
                    continue
            for m, mbits in (("up", up), ("down", down)):
                trans.append((si, by_rank[r] & mbits, False, states[r, m]))
    finals = frozenset({0} | {i for k, i in states.items() if k is not None and k[1] == "down"})
    return fsa.Automaton(space, len(states), 0, finals, tuple(trans))


@lru_cache(maxsize=None)
def _grammar():
    from .temiar import Grammar
    return Grammar.default()


def constraint(name: str) -> fsa.Automaton:
    """Compile a named constraint of the bundled grammar."""
    return _grammar().compile(name)


def syllabification() -> fsa.Automaton:
    return constraint("syllabification")


def prosodic_constraints() -> fsa.Automaton:
    return constraint("prosodic_constraints")


def stress() -> fsa.Automaton:
    return constraint("stress")


def word() -> fsa.Automaton:
    return constraint("word")


def positional_classification() -> fsa.Automaton:
    return constraint("positional_classification")
