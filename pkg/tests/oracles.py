"""Independent reference implementations used by the tests.

These work on explicit symbol-level transition sets and brute-force walks,
sharing no code with the library beyond the ``Automaton`` record itself.
"""

from __future__ import annotations

import re

from hypothesis import strategies as st

from olpm import fsa
from olpm.alphabet import REPEAT, SKIP, plain_space

ABCD = plain_space("abcd")
SELOG = plain_space("selog", {":1": "sg", ":0": "elo"})


def random_automaton(rng, space=ABCD, max_states=6, n_symbols=4, extra=None, trim=True):
    """Random set-labelled automaton over the first ``n_symbols`` segments.

    A random spanning tree makes every state reachable; ``extra`` further
    arcs (default: up to one per state) add cycles and branching.
    """
    n = rng.randint(1, max_states)
    seg_bits = [1 << (i + 2) for i in range(n_symbols)]

    def label():
        bits = 0
        while not bits:
            bits = sum(b for b in seg_bits if rng.random() < 0.4)
        return bits

    trans = [(rng.randrange(q), label(), rng.random() < 0.5, q) for q in range(1, n)]
    for _ in range(rng.randint(0, n) if extra is None else extra):
        trans.append((rng.randrange(n), label(), rng.random() < 0.5, rng.randrange(n)))
    finals = frozenset(q for q in range(n) if rng.random() < 0.4) or frozenset({n - 1})
    a = fsa.Automaton(space, n, 0, finals, tuple(trans))
    return fsa.trim(a) if trim else a


@st.composite
def automata(draw, space=ABCD, max_states=4, n_symbols=3, allow_epsilons=False):
    n = draw(st.integers(1, max_states))
    label = st.integers(1, (1 << n_symbols) - 1).map(lambda m: m << 2)
    trans = draw(st.lists(st.tuples(st.integers(0, n - 1), label, st.booleans(), st.integers(0, n - 1)),
                          max_size=2 * n + 1))
    eps = ()
    if allow_epsilons:
        eps = tuple(draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n)))
    finals = frozenset(draw(st.sets(st.integers(0, n - 1))))
    return fsa.Automaton(space, n, 0, finals, tuple(trans), eps)


# --- symbol-level oracles --------------------------------------------------------

def expand(a):
    """Symbol-level transitions ``(src, symbol, producer, dst)`` of an epsilon-free automaton."""
    assert not a.epsilons
    return {(s, sym, p, d) for s, b, p, d in a.transitions for sym in a.space.members(b)}


def walk(triples, start, finals, max_len):
    """All (symbol, producer) strings of length <= max_len, by brute-force path search."""
    out = {}
    for s, sym, p, d in triples:
        out.setdefault(s, []).append((sym, p, d))
    found = set()
    stack = [(start, ())]
    while stack:
        q, text = stack.pop()
        if q in finals:
            found.add(text)
        if len(text) < max_len:
            for sym, p, d in out.get(q, ()):
                stack.append((d, text + ((sym, p),)))
    return found


def bounded_equal(t1, init1, fin1, t2, init2, fin2, max_len):
    """Do two symbol-level transition sets accept the same strings up to ``max_len``?

    Exhaustive over every (symbol, producer) string, but memoized on the pair
    of reachable state sets so shared suffixes are explored once.
    """
    def index(triples):
        out = {}
        for s, sym, p, d in triples:
            out.setdefault((s, sym, p), set()).add(d)
        return out

    o1, o2 = index(t1), index(t2)
    letters = {(sym, p) for _, sym, p, _ in t1 | t2}
    memo = {}

    def same(q1, q2, depth):
        key = (q1, q2, depth)
        if key not in memo:
            ok = bool(q1 & fin1) == bool(q2 & fin2)
            if ok and depth:
                for sym, p in letters:
                    n1 = frozenset().union(*(o1.get((q, sym, p), ()) for q in q1))
                    n2 = frozenset().union(*(o2.get((q, sym, p), ()) for q in q2))
                    if (n1 or n2) and not same(n1, n2, depth - 1):
                        ok = False
                        break
            memo[key] = ok
        return memo[key]

    return same(frozenset({init1}), frozenset({init2}), max_len)


def product_walk(t1, init1, fin1, t2, init2, fin2, max_len):
    """Open intersection by brute force: walk both transition sets in lockstep, pc = OR."""
    o1, o2 = {}, {}
    for s, sym, p, d in t1:
        o1.setdefault(s, []).append((sym, p, d))
    for s, sym, p, d in t2:
        o2.setdefault((s, sym), []).append((p, d))
    found = set()
    stack = [(init1, init2, ())]
    while stack:
        q1, q2, text = stack.pop()
        if q1 in fin1 and q2 in fin2:
            found.add(text)
        if len(text) < max_len:
            for sym, p1, d1 in o1.get(q1, ()):
                for p2, d2 in o2.get((q2, sym), ()):
                    stack.append((d1, d2, text + ((sym, p1 or p2),)))
    return found


def repeats_by_definition(triples):
    return triples | {(p, REPEAT, False, q) for q, _, _, p in triples}


def skips_by_definition(triples):
    return triples | {(q, SKIP, False, p) for q, _, _, p in triples}


def self_loops_by_definition(triples, nstates, space):
    segs = list(space.members(space.segment_mask))
    return triples | {(q, sym, False, q) for q in range(nstates) for sym in segs}


def language(a, max_len):
    return set(fsa.enumerate_strings(a, max_len, with_pc=True))


# --- phonotactics ----------------------------------------------------------------

def is_vowel(space, phoneme):
    return "vowel" in space.phonemes[phoneme].features


def cv_shape(space, surface):
    return "".join("V" if is_vowel(space, ch) else "C" for ch in surface)


def parses_into_cv_cvc(space, surface):
    """Surface string check: consonant edges, CV/CVC syllables, long vowels as VV."""
    return re.fullmatch(r"(?:CVV?C?)+", cv_shape(space, surface)) is not None and \
        cv_shape(space, surface)[0] == "C" == cv_shape(space, surface)[-1]


def role_syllables(space, labels):
    """Split a label path into syllables by role; ``None`` if it does not parse.

    Each segmental label must have a single phoneme and role.  A syllable is
    an onset consonant, a nucleus vowel, optionally the second half of a
    long vowel in coda role, and optionally a coda consonant.
    """
    segs = []
    for bits, _ in labels:
        if not bits & space.segment_mask:
            continue
        syms = [space.symbols[i] for i in space.members(bits)]
        kinds = {(s.phoneme, s.role) for s in syms}
        if len(kinds) != 1:
            return None
        segs.append(kinds.pop())
    sylls = []
    i = 0
    while i < len(segs):
        ph, role = segs[i]
        if role != "Ons" or is_vowel(space, ph):
            return None
        if i + 1 >= len(segs) or segs[i + 1][1] != "Nuc" or not is_vowel(space, segs[i + 1][0]):
            return None
        syll = [segs[i], segs[i + 1]]
        i += 2
        if i < len(segs) and segs[i] == (syll[1][0], "Cod"):
            syll.append(segs[i])
            i += 1
        if i < len(segs) and segs[i][1] == "Cod" and not is_vowel(space, segs[i][0]):
            syll.append(segs[i])
            i += 1
        sylls.append("".join(ph for ph, _ in syll))
    return sylls
