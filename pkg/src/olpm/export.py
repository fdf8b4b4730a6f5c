"""Rendering and serialization of automata: DOT graphs and a JSON format."""

from __future__ import annotations

import json
import re
from math import prod

from .alphabet import ROLES, SymbolSpace
from .fsa import Automaton

_DIMS = ("sync", "stressed", "ons", "cod", "position", "mark")


def _value_name(dim: str, value) -> str:
    if dim == "sync":
        return f"':{value}'"
    if dim == "stressed":
        return "stressed" if value else "unstressed"
    if dim in ("ons", "cod"):
        return dim if value else f"~{dim}"
    return value


def _quote(name: str) -> str:
    return name if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) else f"'{name}'"


def _alternatives(names: list[str]) -> str:
    return names[0] if len(names) == 1 else "(" + ";".join(names) + ")"


def _product_formula(space: SymbolSpace, members: list) -> str | None:
    """Formula for ``members`` if they form a full product of dimension values."""
    phonemes = sorted({s.phoneme for s in members}, key=list(space.phonemes).index)
    values = {d: sorted({getattr(s, d) for s in members}, key=repr) for d in _DIMS}
    if len(members) != len(phonemes) * prod(len(v) for v in values.values()):
        return None
    parts = []
    if len(phonemes) < len(space.phonemes):
        parts.append(_alternatives([_quote(p) for p in phonemes]))
    roles = len(values["ons"]) == len(values["cod"]) == 1 and values["ons"][0] is not None
    for d in _DIMS:
        if roles and d in ("ons", "cod"):
            if d == "ons":
                parts.append("'" + ROLES[values["ons"][0], values["cod"][0]] + "'")
            continue
        present = {getattr(s, d) for s in space.symbols if not s.technical}
        if len(values[d]) < len(present):
            parts.append(_alternatives([_value_name(d, v) for v in values[d]]))
    return "&".join(parts) or "segment"


def formula(space: SymbolSpace, bits: int) -> str:
    """Compact, human-readable type formula for a symbol set."""
    if bits == space.full:
        return "anything"
    out = [space.symbols[i].kind for i in space.members(bits & space.technical_mask)]
    seg = bits & space.segment_mask
    if seg:
        members = [space.symbols[i] for i in space.members(seg)]
        whole = _product_formula(space, members)
        if whole is None:
            by_ph: dict = {}
            for s in members:
                by_ph.setdefault(s.phoneme, []).append(s)
            pieces = []
            for ph, group in by_ph.items():
                f = _product_formula(space, group)
                pieces.append(f if f is not None else f"{ph}[{len(group)}]")
            whole = ";".join(pieces)
        out.append(whole)
    return ";".join(out) if out else "{}"


def to_dot(a: Automaton, name: str = "olpm") -> str:
    """Graphviz source; producer edges are drawn bold, consumer edges plain."""
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=LR;", '  node [shape=circle];',
             '  __start [shape=point];', f"  __start -> {a.start};"]
    for q in range(a.nstates):
        if q in a.finals:
            lines.append(f"  {q} [shape=doublecircle];")
    if not a.transitions and not a.finals:
        lines.append(f"  {a.start};")
    for src, bits, pc, dst in a.transitions:
        label = json.dumps(formula(a.space, bits) + (" +" if pc else " -"))
        style = ", style=bold" if pc else ""
        lines.append(f"  {src} -> {dst} [label={label}{style}];")
    for src, dst in a.epsilons:
        lines.append(f'  {src} -> {dst} [label="eps", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(a: Automaton) -> str:
    data = {
        "states": a.nstates,
        "start": a.start,
        "finals": sorted(a.finals),
        "transitions": [[s, hex(b), bool(p), d] for s, b, p, d in a.transitions],
        "epsilons": [list(e) for e in a.epsilons],
    }
    return json.dumps(data, indent=1)


def from_json(text: str, space: SymbolSpace) -> Automaton:
    data = json.loads(text)
    n = data["states"]
    trans = []
    for s, b, p, d in data["transitions"]:
        bits = int(b, 16)
        if bits >> space.size:
            raise ValueError(f"label {b} exceeds the {space.size}-symbol space")
        if not (0 <= s < n and 0 <= d < n):
            raise ValueError(f"transition {s}->{d} refers to a missing state")
        trans.append((s, bits, bool(p), d))
    return Automaton(space, n, data["start"], frozenset(data["finals"]), tuple(trans),
                     tuple(tuple(e) for e in data.get("epsilons", ())))
