"""The Temiar grammar fragment: lexicon, wordforms and paradigms."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources

from . import fsa
from .alphabet import IPA, SymbolSpace, build_space, load_inventory
from .combinators import Compiler, GrammarError, MacroEnv
from .syntax import And, Call, Concat, Definition, Node, Str, Sym, parse_expression, parse_grammar

log = logging.getLogger(__name__)

VOICES = ("active", "causative")
ASPECTS = ("perfective", "simulfactive", "continuative")
ALTERNATIONS = {"alternating_labial": ("p", "m"), "alternating_dental": ("t", "n"),
                "alternating_velar": ("k", "N")}
FLAGS = {"has_prefinal_syllable", "plain", *ALTERNATIONS}


class UnknownRoot(KeyError):
    pass


def _data(name: str) -> str:
    return resources.files("olpm.data").joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class LexiconEntry:
    name: str
    root: str
    flags: frozenset = frozenset()
    gloss: str = ""

    def __post_init__(self):
        unknown = set(self.flags) - FLAGS
        if unknown:
            raise GrammarError(f"{self.name}: unknown lexicon flags {sorted(unknown)}")
        alts = [f for f in self.flags if f in ALTERNATIONS]
        if len(alts) > 1:
            raise GrammarError(f"{self.name}: at most one alternating final")
        if alts and not self.root.endswith(ALTERNATIONS[alts[0]][0]):
            raise GrammarError(f"{self.name}: {alts[0]} needs a root ending in /{ALTERNATIONS[alts[0]][0]}/")

    @property
    def stem_expr(self) -> Node:
        alts = [f for f in self.flags if f in ALTERNATIONS]
        text = self.root[:-1] if alts else self.root
        if "plain" in self.flags:
            material = [Call("producer", (Sym(ch),)) for ch in text]
        elif text:
            material = [Call("stringToSegments", (Str(text),))]
        else:
            material = []
        if alts:
            material.append(Sym(alts[0]))
        if not alts and "plain" not in self.flags:
            expr = Call("stem", (Str(self.root),))
        else:
            expr = Call("stem0", (material[0] if len(material) == 1 else Concat(tuple(material)),))
        if "has_prefinal_syllable" in self.flags:
            expr = And((expr, Sym("has_prefinal_syllable")))
        return expr


def parse_lexicon(text: str) -> list[LexiconEntry]:
    """``name<TAB>root<TAB>flag,flag[<TAB>gloss]`` lines; ``%`` starts a comment."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("%", 1)[0].rstrip("\n")
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) < 2:
            raise GrammarError(f"lexicon line {lineno}: expected name<TAB>root<TAB>flags")
        flags = frozenset(f.strip() for f in cols[2].split(",") if f.strip()) if len(cols) > 2 else frozenset()
        gloss = cols[3].strip() if len(cols) > 3 else ""
        entries.append(LexiconEntry(cols[0].strip(), cols[1].strip(), flags, gloss))
    return entries


@dataclass(frozen=True)
class ParadigmCell:
    root: str
    voice: str
    aspect: str
    surface: tuple = ()


def cell_expression(root: str, voice: str, aspect: str) -> Node:
    parts = [Sym(root)]
    if aspect != "perfective":
        parts.append(Sym(aspect))
    if voice == "causative":
        parts.append(Sym("causative"))
    return parts[0] if len(parts) == 1 else And(tuple(parts))


class Grammar:
    """A compiled-on-demand grammar: macros, lexicon and symbol space."""

    _defaults: dict = {}

    def __init__(self, text: str | None = None, lexicon: list[LexiconEntry] | None = None,
                 space: SymbolSpace | None = None, optimize: bool = True, flags=()):
        self.space = space or build_space()
        self.env = MacroEnv()
        self.env.load(_data("temiar.olpm") if text is None else text)
        if "causative_b" in flags:
            for d in parse_grammar(_data("causative_b.olpm")):
                self.env.define(d, replace=True)
        self.lexicon: dict[str, LexiconEntry] = {}
        for entry in parse_lexicon(_data("temiar.lex")) if lexicon is None else lexicon:
            self.add_entry(entry)
        self.compiler = Compiler(self.env, self.space, optimize=optimize)

    @classmethod
    def default(cls, optimize: bool = True) -> "Grammar":
        if optimize not in cls._defaults:
            cls._defaults[optimize] = cls(optimize=optimize)
        return cls._defaults[optimize]

    @classmethod
    def from_files(cls, grammar=None, lexicon=None, inventory=None, **kw) -> "Grammar":
        text = None
        if grammar is not None:
            with open(grammar, encoding="utf-8") as fh:
                text = fh.read()
        entries = None
        if lexicon is not None:
            with open(lexicon, encoding="utf-8") as fh:
                entries = parse_lexicon(fh.read())
        space = build_space(load_inventory(inventory)) if inventory is not None else None
        return cls(text, entries, space, **kw)

    def add_entry(self, entry: LexiconEntry) -> None:
        self.env.define(Definition(entry.name, (), entry.stem_expr))
        self.lexicon[entry.name] = entry

    # --- evaluation ------------------------------------------------------

    def compile(self, expr) -> fsa.Automaton:
        return self.compiler.compile(expr)

    def wordform(self, expr) -> fsa.Automaton:
        if isinstance(expr, str):
            expr = parse_expression(expr)
        result = self.compile(Call("wordform", (expr,)))
        if not result.finals:
            log.warning("wordform(%s) is empty", expr)
        return result

    def surfaces(self, a: fsa.Automaton, max_len: int = 32) -> list[str]:
        return surface_forms(a, max_len)

    def paradigm(self, root: str) -> list[ParadigmCell]:
        if root not in self.lexicon:
            raise UnknownRoot(root)
        cells = []
        for voice in VOICES:
            for aspect in ASPECTS:
                a = self.wordform(cell_expression(root, voice, aspect))
                cells.append(ParadigmCell(root, voice, aspect, tuple(self.surfaces(a))))
        return cells


# --- rendering -----------------------------------------------------------------

def _phoneme_names(space: SymbolSpace, bits: int, cache: dict) -> tuple:
    if bits not in cache:
        names = [p.name for p in space.inventory if bits & space.phoneme_mask(p.name)]
        if bits & space.technical_mask:
            names.append("")
        cache[bits] = tuple(names)
    return cache[bits]


def surface_forms(a: fsa.Automaton, max_len: int = 32) -> list[str]:
    """Distinct segmental yields of accepted strings of length <= ``max_len``."""
    a = fsa.remove_epsilons(a)
    cache: dict = {}
    found = set()
    frontier = {("", a.start)}
    for _ in range(max_len + 1):
        nxt = set()
        for text, q in frontier:
            if q in a.finals:
                found.add(text)
            for b, _, d in a.out[q]:
                for name in _phoneme_names(a.space, b, cache):
                    item = (text + name, d)
                    nxt.add(item)
        frontier = nxt
        if not frontier:
            break
    return sorted(found, key=lambda s: (len(s), s))


def surface(space: SymbolSpace, symbols) -> str:
    """Segmental yield of a concrete symbol string (technical symbols dropped)."""
    out = []
    for item in symbols:
        idx = item[0] if isinstance(item, tuple) else item
        sym = space.symbols[idx]
        if not sym.technical:
            out.append(sym.phoneme)
    return "".join(out)


def to_ipa(text: str) -> str:
    return "".join(IPA.get(ch, ch) for ch in text)


def annotate(space: SymbolSpace, symbols) -> str:
    """Syllabified, stress-marked yield; copied segments are wrapped in ``*``.

    A segment counts as copied when the next symbol is ``repeat``: the string
    then moves back and realises that material a second time.
    """
    syms = [space.symbols[i[0] if isinstance(i, tuple) else i] for i in symbols]
    # copies carry the stress of their source, so only the last stressed onset is marked
    stressed = [k for k, s in enumerate(syms) if not s.technical and s.stressed and s.role == "Ons"]
    mark_at = stressed[-1] if stressed else None
    out = []
    seg_seen = False
    for k, sym in enumerate(syms):
        if sym.technical:
            continue
        if sym.ons and not sym.cod and seg_seen:
            out.append(".")
        if k == mark_at:
            out.append('"')
        name = sym.phoneme
        if k + 1 < len(syms) and syms[k + 1].kind == "repeat":
            name = f"*{name}*"
        out.append(name)
        seg_seen = True
    return "".join(out)


def symbol_string(space: SymbolSpace, symbols) -> str:
    parts = []
    for item in symbols:
        idx, pc = item if isinstance(item, tuple) else (item, None)
        text = str(space.symbols[idx])
        parts.append(text.upper() if pc and space.symbols[idx].technical else text)
    return " ".join(parts)
