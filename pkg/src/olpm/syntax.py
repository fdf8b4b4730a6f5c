"""Abstract syntax and parser for the grammar notation.

The notation follows the FSA Utilities conventions::

    []  [E1, ..., En]     empty string / concatenation
    {}  {E1, ..., En}     empty language / union
    E*  E+  E^            Kleene star, plus, optionality (postfix, bind tightest)
    E1 & E2               intersection (conjunction inside type formulas)
    T1 ; T2   ~T          disjunction / complement of type formulas
    A -r-> B / C          monotonic rule, context on the right (-l-> on the left)
    name(Arg, ...) := Body.
    % comment

Operator precedence from loosest to tightest: rule arrow, ``;``, ``&``,
prefix ``~``, postfix operators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class GrammarSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.pos = pos
        self.line = line
        self.column = col


class Node:
    """Base class of AST nodes; all nodes are hashable values."""


@dataclass(frozen=True)
class Sym(Node):
    name: str

    def __str__(self):
        if re.fullmatch(r"[a-z_][A-Za-z0-9_]*", self.name):
            return self.name
        return f"'{self.name}'"


@dataclass(frozen=True)
class Str(Node):
    text: str

    def __str__(self):
        return f'"{self.text}"'


@dataclass(frozen=True)
class Concat(Node):
    items: tuple

    def __str__(self):
        return "[" + ", ".join(map(str, self.items)) + "]"


@dataclass(frozen=True)
class Union(Node):
    items: tuple

    def __str__(self):
        return "{" + ", ".join(map(str, self.items)) + "}"


@dataclass(frozen=True)
class Star(Node):
    expr: Node

    def __str__(self):
        return f"({self.expr})*"


@dataclass(frozen=True)
class Plus(Node):
    expr: Node

    def __str__(self):
        return f"({self.expr})+"


@dataclass(frozen=True)
class Option(Node):
    expr: Node

    def __str__(self):
        return f"({self.expr})^"


@dataclass(frozen=True)
class And(Node):
    items: tuple

    def __str__(self):
        return "(" + " & ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class Or(Node):
    items: tuple

    def __str__(self):
        return "(" + ";".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class Not(Node):
    expr: Node

    def __str__(self):
        return f"~{self.expr}"


@dataclass(frozen=True)
class Rule(Node):
    direction: str  # 'r' or 'l'
    focus: Node
    target: Node
    context: Node

    def __str__(self):
        return f"({self.focus} -{self.direction}-> {self.target} / {self.context})"


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple

    def __str__(self):
        return f"{self.name}(" + ", ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Definition:
    name: str
    params: tuple
    body: Node
    pos: int = 0


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<arrow>-[rl]->)
  | (?P<define>:=)
  | (?P<string>"[^"]*")
  | (?P<quoted>'[^']*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[\[\]{}(),*+^&;~/.])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GrammarSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise GrammarSyntaxError(msg, self.text, tok[2])

    def take(self, value=None, kind=None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            self.error(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def at(self, value):
        return self.peek()[1] == value and self.peek()[0] in ("punct", "define", "arrow")

    # grammar ------------------------------------------------------------

    def definitions(self) -> list[Definition]:
        defs = []
        while self.peek()[0] != "eof":
            start = self.peek()
            name = self.take(kind="ident")[1]
            params = ()
            if self.at("("):
                self.take("(")
                names = [self.take(kind="ident")[1]]
                while self.at(","):
                    self.take(",")
                    names.append(self.take(kind="ident")[1])
                self.take(")")
                params = tuple(names)
            self.take(":=")
            body = self.expr()
            self.take(".")
            defs.append(Definition(name, params, body, start[2]))
        return defs

    def expr(self) -> Node:
        left = self.semi()
        if self.peek()[0] == "arrow":
            direction = self.take(kind="arrow")[1][1]
            target = self.semi()
            self.take("/")
            context = self.semi()
            return Rule(direction, left, target, context)
        return left

    def semi(self) -> Node:
        items = [self.amp()]
        while self.at(";"):
            self.take(";")
            items.append(self.amp())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def amp(self) -> Node:
        items = [self.unary()]
        while self.at("&"):
            self.take("&")
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self) -> Node:
        if self.at("~"):
            self.take("~")
            return Not(self.unary())
        return self.postfix()

    def postfix(self) -> Node:
        node = self.primary()
        while True:
            if self.at("*"):
                self.take("*")
                node = Star(node)
            elif self.at("+"):
                self.take("+")
                node = Plus(node)
            elif self.at("^"):
                self.take("^")
                node = Option(node)
            else:
                return node

    def _list(self, close):
        items = []
        if not self.at(close):
            items.append(self.expr())
            while self.at(","):
                self.take(",")
                items.append(self.expr())
        self.take(close)
        return tuple(items)

    def primary(self) -> Node:
        kind, value, _ = self.peek()
        if kind == "punct" and value == "[":
            self.take("[")
            items = self._list("]")
            return items[0] if len(items) == 1 else Concat(items)
        if kind == "punct" and value == "{":
            self.take("{")
            items = self._list("}")
            return items[0] if len(items) == 1 else Union(items)
        if kind == "punct" and value == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if kind == "string":
            self.i += 1
            return Str(value[1:-1])
        if kind == "quoted":
            self.i += 1
            return Sym(value[1:-1])
        if kind == "ident":
            self.i += 1
            if self.at("("):
                self.take("(")
                return Call(value, self._list(")"))
            return Sym(value)
        self.error(f"unexpected {value or 'end of input'!r}")


def parse_grammar(text: str) -> list[Definition]:
    return _Parser(text).definitions()


def parse_expression(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "eof":
        p.error(f"trailing input {p.peek()[1]!r}")
    return node


def substitute(node, bindings: dict):
    """Replace parameter symbols by their bound argument nodes."""
    if not bindings:
        return node
    if isinstance(node, Sym):
        return bindings.get(node.name, node)
    if isinstance(node, (Concat, Union, And, Or)):
        return type(node)(tuple(substitute(i, bindings) for i in node.items))
    if isinstance(node, (Star, Plus, Option, Not)):
        return type(node)(substitute(node.expr, bindings))
    if isinstance(node, Rule):
        return Rule(node.direction, *(substitute(x, bindings) for x in (node.focus, node.target, node.context)))
    if isinstance(node, Call):
        return Call(node.name, tuple(substitute(a, bindings) for a in node.args))
    return node
