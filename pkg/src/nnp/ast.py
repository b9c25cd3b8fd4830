"""Expression trees with their concrete syntax and JSON form.

Expressions are immutable trees. Leaves are the elementary expressions
`Top`, `Bot`, `Lit` and `Default` plus `Over`, which wraps an elementary
expression and marks a negative occurrence inside a rule head. `And`/`Or`
keep their children in source order.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from typing import Any, Iterator, Union

from nnp.errors import ParseError, PositionError

__all__ = [
    "Atom", "Literal", "Expr", "Top", "Bot", "Lit", "Default", "Over", "And", "Or",
    "TOP", "BOT", "Rule", "Program", "Path", "lit", "parse", "parse_expr",
    "parse_program", "parse_literal", "render", "to_json", "from_json",
    "simplify_constants", "subexpressions", "leaves", "get", "replace_at",
    "literals_of", "is_elementary", "postorder",
]

Path = tuple[int, ...]

_intern_lock = threading.Lock()
_intern: dict[str, int] = {}


def _index_of(name: str) -> int:
    with _intern_lock:
        idx = _intern.get(name)
        if idx is None:
            idx = _intern[name] = len(_intern)
        return idx


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"and", "or", "not", "top", "bot"})


@dataclass(frozen=True, slots=True)
class Atom:
    name: str
    index: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not _IDENT.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")
        object.__setattr__(self, "index", _index_of(self.name))

    def __lt__(self, other: "Atom") -> bool:
        return self.index < other.index

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    negative: bool = False

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.negative)

    @property
    def key(self) -> tuple[int, bool]:
        return (self.atom.index, self.negative)

    def __lt__(self, other: "Literal") -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return ("-" if self.negative else "") + self.atom.name


def lit(text: str) -> Literal:
    """`lit("-a")` is the classical literal ¬a."""
    return parse_literal(text)


def parse_literal(text: str) -> Literal:
    text = text.strip()
    neg = text.startswith("-")
    return Literal(Atom(text[1:] if neg else text), neg)


class Expr:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Top(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Bot(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Lit(Expr):
    literal: Literal


@dataclass(frozen=True, slots=True)
class Default(Expr):
    """Default literal `not l`."""
    literal: Literal


Elementary = Union[Top, Bot, Lit, Default]
_ELEMENTARY = (Top, Bot, Lit, Default)


@dataclass(frozen=True, slots=True)
class Over(Expr):
    """Overlined elementary expression; only meaningful in heads."""
    elem: Expr

    def __post_init__(self):
        if not isinstance(self.elem, _ELEMENTARY):
            raise TypeError("Over wraps an elementary expression")


@dataclass(frozen=True, slots=True)
class And(Expr):
    children: tuple[Expr, ...] = ()

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True, slots=True)
class Or(Expr):
    children: tuple[Expr, ...] = ()

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))


TOP = Top()
BOT = Bot()


def is_elementary(e: Expr) -> bool:
    return isinstance(e, _ELEMENTARY)


@dataclass(frozen=True, slots=True)
class Rule:
    head: Expr
    body: Expr = TOP

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Program:
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        if not isinstance(self.rules, tuple):
            object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def base(self) -> frozenset[Atom]:
        return frozenset(l.atom for l in self.literals())

    def literals(self) -> frozenset[Literal]:
        out: set[Literal] = set()
        for r in self.rules:
            out |= literals_of(r.head)
            out |= literals_of(r.body)
        return frozenset(out)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return render(self)


# ---------------------------------------------------------------- traversal

def leaves(e: Expr, prefix: Path = ()) -> Iterator[tuple[Path, Expr]]:
    """Leaves left to right with their paths."""
    stack = [(prefix, e)]
    while stack:
        path, node = stack.pop()
        if isinstance(node, (And, Or)):
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((path + (i,), node.children[i]))
        else:
            yield path, node


def postorder(e: Expr) -> Iterator[Expr]:
    """Nodes children-first, without recursion."""
    stack: list[tuple[Expr, bool]] = [(e, False)]
    while stack:
        node, done = stack.pop()
        if done or not isinstance(node, (And, Or)):
            yield node
            continue
        stack.append((node, True))
        for c in reversed(node.children):
            stack.append((c, False))


def subexpressions(e: Expr) -> list[tuple[Path, Expr]]:
    out: list[tuple[Path, Expr]] = []
    stack = [((), e)]
    while stack:
        path, node = stack.pop()
        out.append((path, node))
        if isinstance(node, (And, Or)):
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((path + (i,), node.children[i]))
    return out


def get(e: Expr, path: Path) -> Expr:
    for i in path:
        if not isinstance(e, (And, Or)) or not 0 <= i < len(e.children):
            raise IndexError(path)
        e = e.children[i]
    return e


def replace_at(e: Expr, path: Path, new: Expr) -> Expr:
    if not path:
        return new
    assert isinstance(e, (And, Or))
    i = path[0]
    kids = list(e.children)
    kids[i] = replace_at(kids[i], path[1:], new)
    return type(e)(tuple(kids))


def literals_of(e: Expr) -> frozenset[Literal]:
    out = set()
    for _, leaf in leaves(e):
        if isinstance(leaf, Over):
            leaf = leaf.elem
        if isinstance(leaf, (Lit, Default)):
            out.add(leaf.literal)
    return frozenset(out)


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow><-)
  | (?P<punct>[.,\[\]()~-])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass(slots=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg: str, tok: _Tok | None = None, cls=ParseError):
        tok = tok or self.tok
        raise cls(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "eof":
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        tok = self.tok
        self.i += 1
        return tok

    def literal(self) -> Literal:
        neg = False
        if self.tok.text == "-":
            neg = True
            self.i += 1
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.fail(f"expected an atom, found {tok.text or 'end of input'!r}")
        self.i += 1
        return Literal(Atom(tok.text), neg)

    def inner(self, where: str | None) -> Expr:
        tok = self.tok
        if tok.text == "top" and tok.kind == "ident":
            self.i += 1
            return TOP
        if tok.text == "bot" and tok.kind == "ident":
            self.i += 1
            return BOT
        if tok.text == "not" and tok.kind == "ident":
            self.i += 1
            return Default(self.literal())
        return Lit(self.literal())

    def expr(self, where: str | None) -> Expr:
        tok = self.tok
        if tok.kind == "ident" and tok.text in ("and", "or"):
            self.i += 1
            close = "]" if tok.text == "and" else ")"
            self.expect("[" if tok.text == "and" else "(")
            kids: list[Expr] = []
            if self.tok.text != close:
                kids.append(self.expr(where))
                while self.tok.text == ",":
                    self.i += 1
                    kids.append(self.expr(where))
            self.expect(close)
            return (And if tok.text == "and" else Or)(tuple(kids))
        if tok.text == "~":
            if where == "body":
                self.fail("overlined element in a body", tok, PositionError)
            self.i += 1
            return Over(self.inner(where))
        if where == "body" and tok.text == "bot":
            self.fail("bot in a body", tok, PositionError)
        if where == "head" and tok.text == "not":
            self.fail("default literal in a head must be overlined", tok, PositionError)
        return self.inner(where)

    def rule(self) -> Rule:
        head = self.expr("head")
        body: Expr = TOP
        if self.tok.kind == "arrow":
            self.i += 1
            body = self.expr("body")
        self.expect(".")
        return Rule(head, body)

    def program(self) -> Program:
        rules = []
        while self.tok.kind != "eof":
            rules.append(self.rule())
        return Program(tuple(rules))

    def end(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_expr(text: str, position: str | None = None) -> Expr:
    """Parse one expression; `position` is "head", "body" or None (unchecked)."""
    p = _Parser(text)
    e = p.expr(position)
    p.end()
    return e


def parse(text: str) -> Program | Expr:
    """A text ending in `.` is a program, anything else one expression."""
    stripped = re.sub(r"#[^\n]*", "", text).strip()
    if not stripped or stripped.endswith("."):
        return parse_program(text)
    return parse_expr(text)


# ----------------------------------------------------------------- printing

def _text(e: Expr) -> str:
    if isinstance(e, Top):
        return "top"
    if isinstance(e, Bot):
        return "bot"
    if isinstance(e, Lit):
        return str(e.literal)
    if isinstance(e, Default):
        return f"not {e.literal}"
    if isinstance(e, Over):
        return "~" + _text(e.elem)
    if isinstance(e, And):
        return "and[" + ", ".join(_text(c) for c in e.children) + "]"
    if isinstance(e, Or):
        return "or(" + ", ".join(_text(c) for c in e.children) + ")"
    raise TypeError(e)


def _rule_text(r: Rule) -> str:
    if r.body == TOP:
        return f"{_text(r.head)}."
    return f"{_text(r.head)} <- {_text(r.body)}."


def to_json(value: Program | Rule | Expr) -> Any:
    if isinstance(value, Program):
        return {"rules": [to_json(r) for r in value.rules]}
    if isinstance(value, Rule):
        return {"head": to_json(value.head), "body": to_json(value.body)}
    e = value
    if isinstance(e, Top):
        return {"top": True}
    if isinstance(e, Bot):
        return {"bot": True}
    if isinstance(e, Lit):
        if e.literal.negative:
            return {"lit": str(e.literal)}
        return {"atom": e.literal.atom.name}
    if isinstance(e, Default):
        return {"not": to_json(Lit(e.literal))}
    if isinstance(e, Over):
        return {"over": to_json(e.elem)}
    if isinstance(e, And):
        return {"and": [to_json(c) for c in e.children]}
    if isinstance(e, Or):
        return {"or": [to_json(c) for c in e.children]}
    raise TypeError(value)


def from_json(data: Any) -> Program | Rule | Expr:
    if "rules" in data:
        return Program(tuple(from_json(r) for r in data["rules"]))
    if "head" in data:
        return Rule(from_json(data["head"]), from_json(data.get("body", {"top": True})))
    (tag, val), = data.items()
    if tag == "top":
        return TOP
    if tag == "bot":
        return BOT
    if tag == "atom":
        return Lit(Literal(Atom(val)))
    if tag == "lit":
        return Lit(parse_literal(val))
    if tag == "not":
        inner = from_json(val)
        assert isinstance(inner, Lit)
        return Default(inner.literal)
    if tag == "over":
        return Over(from_json(val))
    if tag == "and":
        return And(tuple(from_json(c) for c in val))
    if tag == "or":
        return Or(tuple(from_json(c) for c in val))
    raise ValueError(f"unknown tag {tag!r}")


def render(value: Program | Rule | Expr, format: str = "text") -> str:
    if format == "json":
        return json.dumps(to_json(value))
    if isinstance(value, Program):
        return "".join(_rule_text(r) + "\n" for r in value.rules)
    if isinstance(value, Rule):
        return _rule_text(value)
    return _text(value)


# ----------------------------------------------------- constant simplification

class _False:
    """Falsity that is not a positive head occurrence (e.g. `~bot`)."""


_FALSE = _False()


def _simp(e: Expr, head: bool):
    if isinstance(e, Top):
        return e
    if isinstance(e, Over) and isinstance(e.elem, Top):
        return TOP
    if isinstance(e, Over) and isinstance(e.elem, Bot):
        return _FALSE
    if isinstance(e, Bot):
        return e if head else _FALSE
    if isinstance(e, And):
        kids, changed = [], False
        for c in e.children:
            s = _simp(c, head)
            if s is _FALSE or isinstance(s, Bot):
                return s
            if isinstance(s, Top):
                changed = True
                continue
            changed |= s is not c
            kids.append(s)
        if not changed:
            return e if kids else TOP
        if not kids:
            return TOP
        return kids[0] if len(kids) == 1 else And(tuple(kids))
    if isinstance(e, Or):
        kids, changed = [], False
        for c in e.children:
            s = _simp(c, head)
            if isinstance(s, Top):
                return TOP
            if s is _FALSE:
                changed = True
                continue
            changed |= s is not c
            kids.append(s)
        if not changed:
            return e if kids else _FALSE
        if not kids:
            return _FALSE
        return kids[0] if len(kids) == 1 else Or(tuple(kids))
    return e


def simplify_constants(e: Expr, head: bool = False) -> Expr:
    """Propagate ⊤/⊥ away. With `head=True` positive ⊥ occurrences stay put,
    since inside a head they encode constraints."""
    s = _simp(e, head)
    return BOT if s is _FALSE else s
