"""Enrichment operators for prosodic morphology.

``add_repeats`` gives a string automaton backward-pointing ``repeat`` arcs,
``add_skips`` parallel forward ``skip`` arcs, and the self-loop operators
provide insertion sites for infixes.  Every arc introduced here is a
consumer, so it survives closed interpretation only where some affix
produces into it.
"""

from __future__ import annotations

from .alphabet import REPEAT, SKIP
from .fsa import Automaton, trim


class NotNormalized(ValueError):
    pass


def _require_normalized(a: Automaton, op: str) -> None:
    if a.normalized:
        return
    if a.epsilons or trim(a) is not a:
        raise NotNormalized(f"{op} needs an epsilon-free automaton without dead states; normalize first")


def _pairs(a: Automaton):
    seen = []
    known = set()
    for s, _, _, d in a.transitions:
        if (s, d) not in known:
            known.add((s, d))
            seen.append((s, d))
    return seen


def _extend(a: Automaton, extra) -> Automaton:
    return Automaton(a.space, a.nstates, a.start, a.finals, a.transitions + tuple(extra))


def add_repeats(a: Automaton) -> Automaton:
    """For every arc q -> p add a consumer ``repeat`` arc p -> q."""
    _require_normalized(a, "add_repeats")
    bit = 1 << REPEAT
    return _extend(a, [(d, bit, False, s) for s, d in _pairs(a)])


def add_skips(a: Automaton) -> Automaton:
    """For every arc q -> p add a parallel consumer ``skip`` arc."""
    _require_normalized(a, "add_skips")
    bit = 1 << SKIP
    return _extend(a, [(s, bit, False, d) for s, d in _pairs(a)])


def add_self_loops(a: Automaton) -> Automaton:
    """A consumer loop over every segment symbol at every state."""
    _require_normalized(a, "add_self_loops")
    seg = a.space.segment_mask
    return _extend(a, [(q, seg, False, q) for q in range(a.nstates)])


def loop_sites(a: Automaton, cond: int) -> list[int]:
    """States with an outgoing segmental arc whose label lies inside ``cond``."""
    tech = a.space.technical_mask
    sites = []
    for q, edges in enumerate(a.out):
        if any(not (b & tech) and b & ~cond == 0 for b, _, _ in edges):
            sites.append(q)
    return sites


def add_self_loop_before(cond: int, a: Automaton) -> Automaton:
    """Self loops only in front of arcs fully characterised by ``cond``."""
    if not cond:
        raise ValueError("add_self_loop_before: condition denotes no symbol")
    seg = a.space.segment_mask
    return _extend(a, [(q, seg, False, q) for q in loop_sites(a, cond)])


def ignore_symbols(a: Automaton, bits: int) -> Automaton:
    """Consumer loops labelled ``bits`` at every state."""
    if not bits:
        return a
    return _extend(a, [(q, bits, False, q) for q in range(a.nstates)])
