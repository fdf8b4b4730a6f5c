"""Set-labelled, resource-conscious finite-state acceptors.

A transition carries a *label*: a non-empty symbol set (an int bitset over a
:class:`~olpm.alphabet.SymbolSpace`) together with a producer/consumer bit.
Automata are immutable values and every operation below is a pure function.

For determinisation and minimisation the producer bit is part of the label
identity; for intersection it is a resource flag combined by OR (open
interpretation) or required on both sides (closed interpretation).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

from .alphabet import SymbolSpace


class SpaceMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Automaton:
    space: SymbolSpace
    nstates: int
    start: int
    finals: frozenset
    transitions: tuple  # (src, bits, producer, dst)
    epsilons: tuple = ()  # (src, dst)
    normalized: bool = False

    @cached_property
    def out(self) -> list[list[tuple[int, bool, int]]]:
        out = [[] for _ in range(self.nstates)]
        for src, bits, pc, dst in self.transitions:
            out[src].append((bits, pc, dst))
        return out

    @property
    def is_empty(self) -> bool:
        return not trim(self).finals

    def __repr__(self):
        flag = ", normalized" if self.normalized else ""
        return (f"<Automaton {self.nstates} states, {len(self.transitions)} transitions, "
                f"{len(self.finals)} finals{flag}>")


def _check(*autos: Automaton) -> SymbolSpace:
    space = autos[0].space
    for a in autos[1:]:
        if a.space is not space and (a.space.size != space.size or a.space.symbols != space.symbols):
            raise SpaceMismatch("automata are defined over different symbol spaces")
    return space


# --- primitive automata ------------------------------------------------------

def empty(space: SymbolSpace) -> Automaton:
    return Automaton(space, 1, 0, frozenset(), (), normalized=True)


def epsilon(space: SymbolSpace) -> Automaton:
    return Automaton(space, 1, 0, frozenset({0}), (), normalized=True)


def atom(space: SymbolSpace, bits: int, producer: bool = False) -> Automaton:
    """One transition labelled ``(bits, producer)``; empty language if ``bits`` is 0."""
    if not bits:
        return empty(space)
    return Automaton(space, 2, 0, frozenset({1}), ((0, bits, producer, 1),), normalized=True)


def universal(space: SymbolSpace, producer: bool = True, bits: int | None = None) -> Automaton:
    bits = space.full if bits is None else bits
    return Automaton(space, 1, 0, frozenset({0}), ((0, bits, producer, 0),), normalized=True)


def string(space: SymbolSpace, labels: Iterable[int], producer: bool = True) -> Automaton:
    """Linear automaton over the given label sets."""
    labels = list(labels)
    trans = tuple((i, b, producer, i + 1) for i, b in enumerate(labels))
    return Automaton(space, len(labels) + 1, 0, frozenset({len(labels)}), trans)


# --- regular operations ------------------------------------------------------

def _shifted(a: Automaton, k: int):
    trans = [(s + k, b, p, d + k) for s, b, p, d in a.transitions]
    eps = [(s + k, d + k) for s, d in a.epsilons]
    return trans, eps


def concat(*autos: Automaton) -> Automaton:
    if not autos:
        raise ValueError("concat needs at least one automaton")
    space = _check(*autos)
    trans, eps = [], []
    offset = 0
    prev_finals = None
    start = 0
    for a in autos:
        t, e = _shifted(a, offset)
        trans += t
        eps += e
        if prev_finals is not None:
            eps += [(f, a.start + offset) for f in prev_finals]
        prev_finals = [f + offset for f in a.finals]
        offset += a.nstates
    return Automaton(space, offset, start, frozenset(prev_finals), tuple(trans), tuple(eps))


def union(*autos: Automaton) -> Automaton:
    if not autos:
        raise ValueError("union needs at least one automaton")
    space = _check(*autos)
    trans, eps, finals = [], [], []
    offset = 1
    for a in autos:
        t, e = _shifted(a, offset)
        trans += t
        eps += e
        eps.append((0, a.start + offset))
        finals += [f + offset for f in a.finals]
        offset += a.nstates
    return Automaton(space, offset, 0, frozenset(finals), tuple(trans), tuple(eps))


def star(a: Automaton) -> Automaton:
    t, e = _shifted(a, 1)
    e = e + [(0, a.start + 1)] + [(f + 1, 0) for f in a.finals]
    return Automaton(a.space, a.nstates + 1, 0, frozenset({0}), tuple(t), tuple(e))


def plus(a: Automaton) -> Automaton:
    eps = a.epsilons + tuple((f, a.start) for f in a.finals)
    return Automaton(a.space, a.nstates, a.start, a.finals, a.transitions, eps)


def option(a: Automaton) -> Automaton:
    return union(a, epsilon(a.space))


# --- epsilon removal, trimming ---------------------------------------------------

def _closures(a: Automaton) -> list[frozenset]:
    if not a.epsilons:
        return [frozenset((q,)) for q in range(a.nstates)]
    succ = [[] for _ in range(a.nstates)]
    for s, d in a.epsilons:
        succ[s].append(d)
    out = []
    for q in range(a.nstates):
        seen = {q}
        stack = [q]
        while stack:
            for r in succ[stack.pop()]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        out.append(frozenset(seen))
    return out


def remove_epsilons(a: Automaton) -> Automaton:
    if not a.epsilons:
        return a
    closures = _closures(a)
    trans = set()
    finals = set()
    for q in range(a.nstates):
        for r in closures[q]:
            if r in a.finals:
                finals.add(q)
            for b, p, d in a.out[r]:
                trans.add((q, b, p, d))
    return trim(Automaton(a.space, a.nstates, a.start, frozenset(finals), tuple(sorted(trans))))


def trim(a: Automaton) -> Automaton:
    """Keep only states that are both accessible and co-accessible."""
    succ = [[] for _ in range(a.nstates)]
    pred = [[] for _ in range(a.nstates)]
    for s, _, _, d in a.transitions:
        succ[s].append(d)
        pred[d].append(s)
    for s, d in a.epsilons:
        succ[s].append(d)
        pred[d].append(s)

    def reach(seeds, edges):
        seen = set(seeds)
        stack = list(seeds)
        while stack:
            for r in edges[stack.pop()]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    live = reach([a.start], succ) & reach(a.finals, pred)
    if a.start not in live:
        return empty(a.space)
    if len(live) == a.nstates:
        return a
    order = sorted(live)
    ren = {q: i for i, q in enumerate(order)}
    trans = tuple((ren[s], b, p, ren[d]) for s, b, p, d in a.transitions if s in live and d in live)
    eps = tuple((ren[s], ren[d]) for s, d in a.epsilons if s in live and d in live)
    return Automaton(a.space, len(order), ren[a.start], frozenset(ren[f] for f in a.finals if f in live),
                     trans, eps)


# --- determinisation and minimisation ------------------------------------------

def refine(items: Iterable[tuple[int, object]]) -> list[tuple[int, frozenset]]:
    """Split overlapping ``(bits, target)`` pairs into disjoint classes.

    Returns ``(bits, targets)`` with pairwise disjoint ``bits``; classes that
    reach the same target set are merged.
    """
    parts: list[tuple[int, frozenset]] = []
    for bits, target in items:
        new = []
        rest = bits
        for pb, pt in parts:
            inter = pb & bits
            if inter:
                new.append((inter, pt | {target}))
                diff = pb & ~bits
                if diff:
                    new.append((diff, pt))
                rest &= ~pb
            else:
                new.append((pb, pt))
        if rest:
            new.append((rest, frozenset((target,))))
        parts = new
    merged: dict[frozenset, int] = {}
    for bits, targets in parts:
        merged[targets] = merged.get(targets, 0) | bits
    return [(bits, targets) for targets, bits in merged.items()]


def determinize(a: Automaton) -> Automaton:
    closures = _closures(a)
    out = a.out
    start = closures[a.start]
    index = {start: 0}
    queue = deque([start])
    trans = []
    finals = set()
    while queue:
        S = queue.popleft()
        si = index[S]
        if S & a.finals:
            finals.add(si)
        by_pc: dict[bool, list] = {False: [], True: []}
        for q in S:
            for b, p, d in out[q]:
                by_pc[p].append((b, d))
        for pc in (False, True):
            for bits, targets in refine(by_pc[pc]):
                T = frozenset().union(*(closures[d] for d in targets))
                if T not in index:
                    index[T] = len(index)
                    queue.append(T)
                trans.append((si, bits, pc, index[T]))
    return Automaton(a.space, len(index), 0, frozenset(finals), tuple(trans))


def _canonical(a: Automaton, cls: list[int] | None = None) -> Automaton:
    """Quotient by ``cls`` (identity if None), merge parallel labels, renumber by BFS."""
    if cls is None:
        cls = list(range(a.nstates))
    groups: dict[int, dict[tuple[bool, int], int]] = {}
    for s, b, p, d in a.transitions:
        g = groups.setdefault(cls[s], {})
        key = (p, cls[d])
        g[key] = g.get(key, 0) | b
    finals = {cls[f] for f in a.finals}
    order = {cls[a.start]: 0}
    queue = deque([cls[a.start]])
    trans = []
    while queue:
        c = queue.popleft()
        edges = sorted(((p, b, d) for (p, d), b in groups.get(c, {}).items()))
        for p, b, d in edges:
            if d not in order:
                order[d] = len(order)
                queue.append(d)
            trans.append((order[c], b, p, order[d]))
    return Automaton(a.space, len(order), 0, frozenset(order[f] for f in finals if f in order),
                     tuple(trans), normalized=True)


def minimize(a: Automaton) -> Automaton:
    """Minimise a trimmed, epsilon-free deterministic automaton (Moore refinement)."""
    out = a.out
    cls = [1 if q in a.finals else 0 for q in range(a.nstates)]
    n_classes = len(set(cls))
    while True:
        sigs: dict = {}
        new = []
        for q in range(a.nstates):
            g: dict[tuple[bool, int], int] = {}
            for b, p, d in out[q]:
                key = (p, cls[d])
                g[key] = g.get(key, 0) | b
            sig = (cls[q], frozenset((p, c, b) for (p, c), b in g.items()))
            new.append(sigs.setdefault(sig, len(sigs)))
        cls = new
        if len(sigs) == n_classes:
            break
        n_classes = len(sigs)
    return _canonical(a, cls)


def normalize(a: Automaton) -> Automaton:
    """Epsilon-free, deterministic, trimmed and minimal equivalent of ``a``."""
    if a.normalized:
        return a
    d = trim(determinize(a))
    if not d.finals:
        return empty(a.space)
    return minimize(d)


def is_deterministic(a: Automaton) -> bool:
    if a.epsilons:
        return False
    for edges in a.out:
        seen = {False: 0, True: 0}
        for b, p, _ in edges:
            if seen[p] & b:
                return False
            seen[p] |= b
    return True


# --- intersection ------------------------------------------------------------------

def product(a: Automaton, b: Automaton, closed: bool = False) -> tuple[Automaton, list[tuple[int, int]]]:
    """Product construction, untrimmed, with the state pair of each result state.

    Two transitions match iff their symbol sets intersect.  In open mode the
    result is a producer when either side is; in closed mode both sides must
    be producers.
    """
    space = _check(a, b)
    a = remove_epsilons(a)
    b = remove_epsilons(b)
    out_a, out_b = a.out, b.out
    pairs = [(a.start, b.start)]
    index = {pairs[0]: 0}
    trans = []
    finals = set()
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        if p in a.finals and q in b.finals:
            finals.add(i)
        for b1, p1, d1 in out_a[p]:
            for b2, p2, d2 in out_b[q]:
                inter = b1 & b2
                if not inter:
                    continue
                if closed:
                    if not (p1 and p2):
                        continue
                    pc = True
                else:
                    pc = p1 or p2
                key = (d1, d2)
                j = index.get(key)
                if j is None:
                    j = index[key] = len(pairs)
                    pairs.append(key)
                trans.append((i, inter, pc, j))
        i += 1
    return Automaton(space, len(pairs), 0, frozenset(finals), tuple(trans)), pairs


def intersect_open(a: Automaton, b: Automaton) -> Automaton:
    return trim(product(a, b)[0])


def intersect_closed(a: Automaton, b: Automaton) -> Automaton:
    return trim(product(a, b, closed=True)[0])


def closed_interpretation(a: Automaton) -> Automaton:
    """Intersect with the universal producer language: unmatched consumers die."""
    return intersect_closed(a, universal(a.space, producer=True))


# --- derived constructions -------------------------------------------------------

def ignore(a: Automaton, b: Automaton) -> Automaton:
    """Allow strings of ``b`` to be interspersed anywhere in strings of ``a``."""
    space = _check(a, b)
    trans = list(a.transitions)
    eps = list(a.epsilons)
    offset = a.nstates
    for q in range(a.nstates):
        t, e = _shifted(b, offset)
        trans += t
        eps += e
        eps.append((q, b.start + offset))
        eps += [(f + offset, q) for f in b.finals]
        offset += b.nstates
    return Automaton(space, offset, a.start, a.finals, tuple(trans), tuple(eps))


def map_labels(a: Automaton, fn: Callable[[int], int], space: SymbolSpace | None = None) -> Automaton:
    """Apply ``fn`` to every label set, dropping transitions whose image is empty."""
    space = space or a.space
    trans = []
    for s, b, p, d in a.transitions:
        nb = fn(b)
        if nb:
            trans.append((s, nb, p, d))
    return Automaton(space, a.nstates, a.start, a.finals, tuple(trans), a.epsilons)


def set_pc(a: Automaton, producer: bool) -> Automaton:
    trans = tuple((s, b, producer, d) for s, b, _, d in a.transitions)
    return Automaton(a.space, a.nstates, a.start, a.finals, trans, a.epsilons)


# --- inspection --------------------------------------------------------------------

def accepts(a: Automaton, symbols: Iterable[int], pcs: Iterable[bool] | None = None) -> bool:
    """Membership of a concrete symbol string (producer bits optional)."""
    closures = _closures(a)
    current = set(closures[a.start])
    symbols = list(symbols)
    pcs = list(pcs) if pcs is not None else [None] * len(symbols)
    for sym, pc in zip(symbols, pcs):
        nxt = set()
        for q in current:
            for b, p, d in a.out[q]:
                if b >> sym & 1 and (pc is None or p == pc):
                    nxt |= closures[d]
        current = nxt
        if not current:
            return False
    return bool(current & a.finals)


def enumerate_strings(a: Automaton, max_len: int, with_pc: bool = False) -> list[tuple]:
    """All accepted concrete strings of length <= ``max_len``.

    Strings are tuples of symbol indices (or ``(index, producer)`` pairs when
    ``with_pc``), sorted by length and then lexicographically.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    a = remove_epsilons(a)
    members = {}

    def expand(bits):
        if bits not in members:
            members[bits] = list(a.space.members(bits))
        return members[bits]

    found = set()
    frontier = {(): {a.start}}
    for length in range(max_len + 1):
        nxt: dict[tuple, set] = {}
        for prefix, states in frontier.items():
            if states & a.finals:
                found.add(prefix)
            if length == max_len:
                continue
            for q in states:
                for b, p, d in a.out[q]:
                    for sym in expand(b):
                        key = prefix + (((sym, p),) if with_pc else (sym,))
                        nxt.setdefault(key, set()).add(d)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), s))


def equivalent(a: Automaton, b: Automaton) -> bool:
    """Language equality over (symbol, producer) strings."""
    _check(a, b)
    na, nb = normalize(a), normalize(b)
    if na.nstates != nb.nstates or na.finals != nb.finals:
        return False
    return sorted(na.transitions) == sorted(nb.transitions)


def is_acyclic(a: Automaton) -> bool:
    a = remove_epsilons(a)
    state = [0] * a.nstates
    for root in range(a.nstates):
        if state[root]:
            continue
        stack = [(root, iter(a.out[root]))]
        state[root] = 1
        while stack:
            q, it = stack[-1]
            for _, _, d in it:
                if state[d] == 1:
                    return False
                if state[d] == 0:
                    state[d] = 1
                    stack.append((d, iter(a.out[d])))
                    break
            else:
                state[q] = 2
                stack.pop()
    return True


def count_paths(a: Automaton) -> int:
    """Number of accepting label paths of an acyclic automaton."""
    a = remove_epsilons(a)
    if not is_acyclic(a):
        raise ValueError("infinitely many paths: automaton is cyclic")
    memo: dict[int, int] = {}

    def count(q):
        if q not in memo:
            memo[q] = (q in a.finals) + sum(count(d) for _, _, d in a.out[q])
        return memo[q]

    import sys
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * a.nstates + 100))
    try:
        return count(a.start)
    finally:
        sys.setrecursionlimit(limit)


def label_paths(a: Automaton, limit: int = 10_000) -> list[list[tuple[int, bool]]]:
    """Accepting label paths of an acyclic automaton, as ``(bits, producer)`` lists."""
    a = remove_epsilons(a)
    if not is_acyclic(a):
        raise ValueError("automaton is cyclic")
    paths = []
    stack = [(a.start, [])]
    while stack:
        q, path = stack.pop()
        if q in a.finals:
            paths.append(path)
            if len(paths) > limit:
                raise ValueError(f"more than {limit} paths")
        for b, p, d in reversed(a.out[q]):
            stack.append((d, path + [(b, p)]))
    return paths
