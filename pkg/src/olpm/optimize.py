"""Bounded Local Optimization: prune technically redundant paths.

Strings that share a segmental yield but place ``skip``/``repeat`` symbols
differently are spurious ambiguities.  Technical symbols cost 1 and segments
cost 0, so among all strings with the same segmental projection only those
with the fewest technical symbols are kept.  Segment costs are identical for
strings with equal projections, which is why only technical symbols are
counted.

The pruning works on whole cost layers: layer ``c`` holds the strings with
exactly ``c`` technical symbols, minus those whose projection is already
realised by a cheaper layer.
"""

from __future__ import annotations

from . import fsa
from .fsa import Automaton

DEFAULT_CYCLIC_BOUND = 32


def _split_labels(a: Automaton) -> Automaton:
    tech = a.space.technical_mask
    trans = []
    for s, b, p, d in a.transitions:
        if b & tech:
            trans.append((s, b & tech, p, d))
        if b & ~tech:
            trans.append((s, b & ~tech, p, d))
    return Automaton(a.space, a.nstates, a.start, a.finals, tuple(trans))


def _max_cost(a: Automaton) -> int:
    tech = a.space.technical_mask
    order = _topological(a)
    best = {q: 0 for q in range(a.nstates)}
    for q in reversed(order):
        best[q] = max([best[d] + (1 if b & tech else 0) for b, _, d in a.out[q]], default=0)
    return best[a.start]


def _topological(a: Automaton) -> list[int]:
    indeg = [0] * a.nstates
    for _, _, _, d in a.transitions:
        indeg[d] += 1
    ready = [q for q in range(a.nstates) if indeg[q] == 0]
    order = []
    while ready:
        q = ready.pop()
        order.append(q)
        for _, _, d in a.out[q]:
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(d)
    return order


def cost_layer(a: Automaton, cost: int, at_least: bool = False) -> Automaton:
    """Strings with exactly ``cost`` technical symbols (or at least, if ``at_least``)."""
    a = _split_labels(fsa.remove_epsilons(a))
    tech = a.space.technical_mask
    width = cost + 1
    trans = []
    for s, b, p, d in a.transitions:
        for k in range(width):
            if b & tech:
                if k < cost:
                    trans.append((s * width + k, b, p, d * width + k + 1))
                elif at_least:
                    trans.append((s * width + k, b, p, d * width + k))
            else:
                trans.append((s * width + k, b, p, d * width + k))
    finals = frozenset(f * width + cost for f in a.finals)
    return fsa.trim(Automaton(a.space, a.nstates * width, a.start * width, finals, tuple(trans)))


def projection(a: Automaton) -> Automaton:
    """Deterministic automaton of segmental yields (technical symbols erased, pc ignored)."""
    tech = a.space.technical_mask
    trans, eps = [], list(a.epsilons)
    for s, b, _, d in a.transitions:
        if b & tech:
            eps.append((s, d))
        if b & ~tech:
            trans.append((s, b & ~tech, False, d))
    return fsa.normalize(Automaton(a.space, a.nstates, a.start, a.finals, tuple(trans), tuple(eps)))


def exclude_projections(a: Automaton, covered: Automaton) -> Automaton:
    """Strings of ``a`` whose segmental yield is not accepted by ``covered``."""
    a = _split_labels(fsa.remove_epsilons(a))
    covered = projection(covered)
    tech = a.space.technical_mask
    pairs = [(a.start, covered.start)]
    index = {pairs[0]: 0}
    trans = []
    finals = set()

    def target(d, r):
        key = (d, r)
        if key not in index:
            index[key] = len(pairs)
            pairs.append(key)
        return index[key]

    i = 0
    while i < len(pairs):
        q, r = pairs[i]
        if q in a.finals and (r is None or r not in covered.finals):
            finals.add(i)
        for b, p, d in a.out[q]:
            if b & tech:
                trans.append((i, b, p, target(d, r)))
                continue
            rest = b
            if r is not None:
                for cb, _, cd in covered.out[r]:
                    inter = b & cb
                    if inter:
                        trans.append((i, inter, p, target(d, cd)))
                        rest &= ~cb
            if rest:
                trans.append((i, rest, p, target(d, None)))
        i += 1
    return fsa.trim(Automaton(a.space, len(pairs), 0, frozenset(finals), tuple(trans)))


def bounded_local_optimization(a: Automaton, max_cost: int | None = None) -> Automaton:
    """Keep, per segmental yield, only the strings with fewest technical symbols.

    Exact for acyclic automata.  For cyclic ones, yields whose cheapest
    string needs more than ``max_cost`` technical symbols are left unpruned.
    """
    a = fsa.normalize(a)
    tech = a.space.technical_mask
    if not a.finals or not any(b & tech for _, b, _, _ in a.transitions):
        return a
    split = _split_labels(a)
    acyclic = fsa.is_acyclic(split)
    bound = _max_cost(split) if acyclic else (max_cost if max_cost is not None else DEFAULT_CYCLIC_BOUND)

    kept: list[Automaton] = []
    covered = None
    for c in range(bound + 1):
        layer = cost_layer(split, c)
        if covered is not None and layer.finals:
            layer = exclude_projections(layer, covered)
        if layer.finals:
            kept.append(layer)
            covered = projection(fsa.union(*kept))  # deterministic, so exclusion is exact
    if not acyclic:
        rest = cost_layer(split, bound + 1, at_least=True)
        if covered is not None and rest.finals:
            rest = exclude_projections(rest, covered)
        if rest.finals:
            kept.append(rest)
    if not kept:
        return fsa.empty(a.space)
    return fsa.normalize(fsa.union(*kept))
