"""Typed symbol space: phoneme inventory, concrete symbols and type formulas.

Every concrete symbol is either one of the two technical marks (``skip``,
``repeat``) or a segment, i.e. a phoneme paired with a synchronisation bit,
a stress value, the two syllable-role features ``ons``/``cod`` and a word
position.  Symbol sets are plain Python ints used as bitsets over the
enumerated space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Iterator

SKIP = 0
REPEAT = 1
N_TECHNICAL = 2

POSITIONS = ("initial", "medial", "final")
ROLES = {(True, False): "Ons", (False, False): "Nuc", (False, True): "Cod", (True, True): "CO"}
MARKS = ("up", "down")

# ASCII names used in grammars, and their IPA rendering
IPA = {"@": "ə", "E": "ɛ", "O": "ɔ", "N": "ŋ", "P": "ʔ"}


class AlphabetError(ValueError):
    pass


class UnknownAtom(AlphabetError):
    pass


@dataclass(frozen=True)
class PhonemeSpec:
    name: str
    sonority: int
    features: frozenset = frozenset()
    is_vowel: bool = False

    def __post_init__(self):
        feats = set(self.features)
        if "vowel" in feats and "consonant" in feats:
            raise AlphabetError(f"phoneme {self.name!r} is both vowel and consonant")
        vowel = self.is_vowel or "vowel" in feats
        feats.add("vowel" if vowel else "consonant")
        object.__setattr__(self, "is_vowel", vowel)
        object.__setattr__(self, "features", frozenset(feats))
        if self.sonority is None or self.sonority < 0:
            raise AlphabetError(f"phoneme {self.name!r} needs a sonority rank >= 0")


@dataclass(frozen=True)
class Symbol:
    kind: str  # 'skip', 'repeat' or 'segment'
    phoneme: str | None = None
    sync: int | None = None
    stressed: bool | None = None
    ons: bool | None = None
    cod: bool | None = None
    position: str | None = None
    mark: str | None = None

    @property
    def technical(self) -> bool:
        return self.kind != "segment"

    @property
    def role(self) -> str | None:
        if self.ons is None:
            return None
        return ROLES[self.ons, self.cod]

    def __str__(self):
        if self.technical:
            return self.kind
        parts = [self.phoneme]
        if self.sync is not None:
            parts.append(f":{self.sync}")
        if self.stressed is not None:
            parts.append("'" if self.stressed else "")
        if self.ons is not None:
            parts.append("/" + self.role)
        if self.position is not None:
            parts.append("/" + self.position[:3])
        if self.mark is not None:
            parts.append("/" + self.mark)
        return "".join(parts)


def _segment_dims(marked: bool):
    dims = [(1, 0), (True, False), (False, True), (False, True), POSITIONS]
    if marked:
        # mark is the outermost dimension so that projecting it away is a shift
        return [(m,) + rest for m in MARKS for rest in itertools.product(*dims)]
    return [(None,) + rest for rest in itertools.product(*dims)]


class SymbolSpace:
    """Enumerated alphabet with an atom table mapping type names to bitsets.

    Indices 0 and 1 are ``skip`` and ``repeat``; segments follow.  A *marked*
    space additionally carries the sonority mark (``up``/``down``) and is only
    used while building sonority-based syllabification.
    """

    def __init__(self, inventory: Iterable[PhonemeSpec], marked: bool = False):
        inventory = list(inventory)
        if not inventory:
            raise AlphabetError("empty phoneme inventory")
        names = [p.name for p in inventory]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise AlphabetError(f"duplicate phoneme names: {sorted(dupes)}")
        self.inventory = tuple(inventory)
        self.phonemes = {p.name: p for p in inventory}
        self.marked = marked

        symbols = [Symbol("skip"), Symbol("repeat")]
        # phoneme varies slowest within a mark block
        blocks = {}
        for d in _segment_dims(marked):
            blocks.setdefault(d[0], []).append(d[1:])
        for mark, rest in blocks.items():
            for p in inventory:
                for sync, stressed, ons, cod, pos in rest:
                    symbols.append(Symbol("segment", p.name, sync, stressed, ons, cod, pos, mark))
        self.symbols: tuple[Symbol, ...] = tuple(symbols)
        self.size = len(symbols)
        self.full = (1 << self.size) - 1
        self.technical_mask = (1 << SKIP) | (1 << REPEAT)
        self.segment_mask = self.full & ~self.technical_mask
        self.n_segments = self.size - N_TECHNICAL
        self._atoms = self._build_atoms()
        self._twin: SymbolSpace | None = None
        self._base: SymbolSpace | None = None

    def __repr__(self):
        kind = "marked " if self.marked else ""
        return f"<{kind}SymbolSpace {len(self.inventory)} phonemes, {self.size} symbols>"

    def __len__(self):
        return self.size

    # --- atoms -----------------------------------------------------------

    def _build_atoms(self) -> dict[str, int]:
        preds = {
            "skip": lambda s: s.kind == "skip",
            "repeat": lambda s: s.kind == "repeat",
            "segment": lambda s: not s.technical,
            "anything": lambda s: True,
            ":1": lambda s: s.sync == 1,
            ":0": lambda s: s.sync == 0,
            "stressed": lambda s: s.stressed is True,
            "unstressed": lambda s: s.stressed is False,
            "ons": lambda s: s.ons is True,
            "cod": lambda s: s.cod is True,
        }
        for role in ROLES.values():
            preds[role] = lambda s, r=role: s.role == r
        for pos in POSITIONS:
            preds[pos] = lambda s, p=pos: s.position == p
        if self.marked:
            for m in MARKS:
                preds[m] = lambda s, m=m: s.mark == m
        features = set().union(*(p.features for p in self.inventory))
        for feat in sorted(features):
            if feat in preds:
                raise AlphabetError(f"feature {feat!r} clashes with a built-in atom")
            preds[feat] = lambda s, f=feat: not s.technical and f in self.phonemes[s.phoneme].features
        for name in self.phonemes:
            if name in preds:
                raise AlphabetError(f"phoneme {name!r} clashes with an atom name")
            preds[name] = lambda s, n=name: s.phoneme == n

        atoms = {}
        for name, pred in preds.items():
            bits = 0
            for i, sym in enumerate(self.symbols):
                if pred(sym):
                    bits |= 1 << i
            atoms[name] = bits
        return atoms

    @property
    def atom_names(self) -> list[str]:
        return list(self._atoms)

    def atom(self, name: str) -> int:
        try:
            return self._atoms[name]
        except KeyError:
            if name in MARKS:
                raise UnknownAtom(f"sonority mark {name!r} is only available inside unmark(...)") from None
            raise UnknownAtom(f"unknown atom {name!r}") from None

    def denote(self, formula) -> int:
        """Bitset denoted by a type formula (a string or a parsed formula)."""
        from .syntax import parse_expression

        if isinstance(formula, str):
            formula = parse_expression(formula)
        return denote(formula, self)

    # --- symbols ---------------------------------------------------------

    def index(self, sym: Symbol) -> int:
        if not hasattr(self, "_index"):
            self._index = {s: i for i, s in enumerate(self.symbols)}
        return self._index[sym]

    def members(self, bits: int) -> Iterator[int]:
        i = 0
        while bits:
            if bits & 1:
                yield i
            bits >>= 1
            i += 1

    def phoneme_mask(self, name: str) -> int:
        return self._atoms[name]

    # --- marked twin -----------------------------------------------------

    def marked_twin(self) -> "SymbolSpace":
        if self.marked:
            return self
        if self._twin is None:
            self._twin = SymbolSpace(self.inventory, marked=True)
            self._twin._base = self
        return self._twin

    @property
    def base(self) -> "SymbolSpace":
        return self._base if self.marked else self

    def unmark_bits(self, bits: int) -> int:
        """Project a marked-space bitset onto the unmarked space."""
        if not self.marked:
            return bits
        n = self.n_segments // 2
        low = (1 << n) - 1
        seg = bits >> N_TECHNICAL
        seg = (seg & low) | (seg >> n)
        return (bits & self.technical_mask) | (seg << N_TECHNICAL)


def denote(node, space: SymbolSpace) -> int:
    """Evaluate a parsed type formula to a bitset.

    ``~T`` complements within the segment subspace unless ``T`` itself
    mentions a technical atom, in which case it complements over everything.
    """
    from . import syntax as ast

    if isinstance(node, ast.Sym):
        return space.atom(node.name)
    if isinstance(node, ast.And):
        bits = space.full
        for item in node.items:
            bits &= denote(item, space)
        return bits
    if isinstance(node, ast.Or):
        bits = 0
        for item in node.items:
            bits |= denote(item, space)
        return bits
    if isinstance(node, ast.Not):
        inner = denote(node.expr, space)
        universe = space.full if _mentions_technical(node.expr) else space.segment_mask
        return universe & ~inner
    raise AlphabetError(f"not a type formula: {node}")


def _mentions_technical(node) -> bool:
    from . import syntax as ast

    if isinstance(node, ast.Sym):
        return node.name in ("skip", "repeat", "anything")
    if isinstance(node, (ast.And, ast.Or)):
        return any(_mentions_technical(i) for i in node.items)
    if isinstance(node, ast.Not):
        return _mentions_technical(node.expr)
    return False


def up_down_mark(space: SymbolSpace, s: int | Symbol, nxt: int | Symbol) -> str:
    """'up' iff sonority rises from ``s`` to ``nxt``."""
    s = space.symbols[s] if isinstance(s, int) else s
    nxt = space.symbols[nxt] if isinstance(nxt, int) else nxt
    if s.technical or nxt.technical:
        raise AlphabetError("sonority marks are defined between segments only")
    a = space.phonemes[s.phoneme].sonority
    b = space.phonemes[nxt.phoneme].sonority
    return "up" if a < b else "down"


# --- inventories -------------------------------------------------------------

def parse_inventory(text: str) -> list[PhonemeSpec]:
    """Read ``name<TAB>sonority<TAB>feature,feature`` lines; ``%`` starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("%", 1)[0].rstrip()
        if not line.strip():
            continue
        cols = line.split("\t")
        name = cols[0].strip()
        if len(cols) < 2 or not cols[1].strip():
            raise AlphabetError(f"line {lineno}: phoneme {name!r} lacks a sonority rank")
        try:
            sonority = int(cols[1])
        except ValueError:
            raise AlphabetError(f"line {lineno}: bad sonority {cols[1]!r}") from None
        feats = frozenset(f.strip() for f in cols[2].split(",") if f.strip()) if len(cols) > 2 else frozenset()
        out.append(PhonemeSpec(name, sonority, feats))
    return out


def load_inventory(path=None) -> list[PhonemeSpec]:
    if path is None:
        text = resources.files("olpm.data").joinpath("temiar.inv").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_inventory(text)


def build_space(inventory: Iterable[PhonemeSpec] | None = None) -> SymbolSpace:
    if inventory is None:
        inventory = load_inventory()
    return SymbolSpace(inventory)


_DEFAULT: SymbolSpace | None = None


def default_space() -> SymbolSpace:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = build_space()
    return _DEFAULT


def plain_space(names: Iterable[str], atoms: dict | None = None) -> "PlainSpace":
    return PlainSpace(names, atoms)


class PlainSpace(SymbolSpace):
    """Bare alphabet: one segment symbol per name plus skip and repeat.

    Handy for testing automata algorithms on tiny alphabets.  ``atoms`` names
    extra symbol sets, e.g. ``{":1": ["s", "g"]}``.
    """

    def __init__(self, names: Iterable[str], atoms: dict | None = None):
        names = list(names)
        if len(set(names)) != len(names) or not names:
            raise AlphabetError("plain space needs distinct, non-empty names")
        self.inventory = tuple(PhonemeSpec(n, 0) for n in names)
        self.phonemes = {p.name: p for p in self.inventory}
        self.marked = False
        self.symbols = (Symbol("skip"), Symbol("repeat")) + tuple(Symbol("segment", n) for n in names)
        self.size = len(self.symbols)
        self.full = (1 << self.size) - 1
        self.technical_mask = (1 << SKIP) | (1 << REPEAT)
        self.segment_mask = self.full & ~self.technical_mask
        self.n_segments = self.size - N_TECHNICAL
        self._atoms = {"skip": 1 << SKIP, "repeat": 1 << REPEAT, "segment": self.segment_mask,
                       "anything": self.full}
        for i, n in enumerate(names):
            self._atoms[n] = 1 << (i + N_TECHNICAL)
        for name, members in (atoms or {}).items():
            if name in self._atoms:
                raise AlphabetError(f"atom {name!r} is already defined")
            self._atoms[name] = sum(self._atoms[m] for m in members)
        self._twin = None
        self._base = None

    def __repr__(self):
        return f"<PlainSpace {[p.name for p in self.inventory]}>"
