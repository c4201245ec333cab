"""LTL abstract syntax, concrete syntax parser and printer.

Concrete grammar (loosest binding last)::

    unary    G F X !            prefix, tightest
    U        right-associative
    &        left-associative
    |        left-associative
    ->       right-associative

Atoms are identifiers ``[A-Za-z_][A-Za-z0-9_]*``; the single letters G, F, X
and U are reserved for the temporal operators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

UNARY = ("G", "F", "X", "!")
BINARY = ("U", "&", "|", "->")
OPERATORS = UNARY + BINARY
TEMPORAL = ("G", "F", "U", "X")

# long names accepted wherever an operator kind is expected (N[And] etc.)
KIND_ALIASES = {
    "G": "G", "F": "F", "X": "X", "U": "U",
    "!": "!", "Neg": "!", "Not": "!",
    "&": "&", "And": "&",
    "|": "|", "Or": "|",
    "->": "->", "Imply": "->", "Implies": "->",
    "Until": "U", "Next": "X", "Finally": "F", "Globally": "G",
}

RESERVED = frozenset({"G", "F", "X", "U"})


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Prop:
    name: str
    index: int


@dataclass(frozen=True)
class Formula:
    """One LTL syntax-tree node.

    ``kind`` is an operator from ``OPERATORS`` or ``"ap"``; atoms carry the
    proposition name in ``name``.
    """

    kind: str
    left: Optional["Formula"] = None
    right: Optional["Formula"] = None
    name: Optional[str] = None

    def __post_init__(self):
        if self.kind == "ap":
            ok = self.name is not None and self.left is None and self.right is None
        elif self.kind in UNARY:
            ok = self.left is not None and self.right is None
        elif self.kind in BINARY:
            ok = self.left is not None and self.right is not None
        else:
            ok = False
        if not ok:
            raise ValueError(f"malformed formula node of kind {self.kind!r}")

    @property
    def is_atom(self) -> bool:
        return self.kind == "ap"

    def children(self) -> tuple["Formula", ...]:
        if self.left is None:
            return ()
        if self.right is None:
            return (self.left,)
        return (self.left, self.right)

    def subformulas(self) -> Iterator["Formula"]:
        """Pre-order walk, repeats included."""
        stack = [self]
        while stack:
            f = stack.pop()
            yield f
            stack.extend(reversed(f.children()))

    def atoms(self) -> set[str]:
        return {f.name for f in self.subformulas() if f.is_atom}

    def __str__(self) -> str:
        return to_string(self)

    # convenience constructors, mostly for tests
    def __and__(self, other: "Formula") -> "Formula":
        return Formula("&", self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Formula("|", self, other)

    def __invert__(self) -> "Formula":
        return Formula("!", self)

    def implies(self, other: "Formula") -> "Formula":
        return Formula("->", self, other)

    def until(self, other: "Formula") -> "Formula":
        return Formula("U", self, other)


def atom(name: str) -> Formula:
    return Formula("ap", name=name)


def G(f: Formula) -> Formula:
    return Formula("G", f)


def F(f: Formula) -> Formula:
    return Formula("F", f)


def X(f: Formula) -> Formula:
    return Formula("X", f)


def tree_size(f: Formula) -> int:
    return sum(1 for _ in f.subformulas())


def make_props(names: Iterable[str]) -> list[Prop]:
    props = [Prop(n, i) for i, n in enumerate(names)]
    seen = set()
    for p in props:
        if p.name in seen:
            raise ValueError(f"duplicate proposition {p.name!r}")
        if p.name in RESERVED or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", p.name):
            raise ValueError(f"invalid proposition name {p.name!r}")
        seen.add(p.name)
    return props


# ---------------------------------------------------------------------------
# printing

_LEVEL = {"->": 1, "|": 2, "&": 3, "U": 4}
_RIGHT_ASSOC = {"->", "U"}
_UNARY_LEVEL = 5
_ATOM_LEVEL = 6


def _level(f: Formula) -> int:
    if f.is_atom:
        return _ATOM_LEVEL
    if f.kind in UNARY:
        return _UNARY_LEVEL
    return _LEVEL[f.kind]


def to_string(f: Formula) -> str:
    """Print with the fewest parentheses that still reparse to ``f``."""
    if f.is_atom:
        return f.name
    if f.kind in UNARY:
        inner = to_string(f.left)
        if _level(f.left) < _UNARY_LEVEL:
            inner = f"({inner})"
        sep = "" if f.kind == "!" else " "
        if f.kind != "!" and inner.startswith("("):
            sep = ""
        return f"{f.kind}{sep}{inner}"
    lvl = _LEVEL[f.kind]
    ls, rs = to_string(f.left), to_string(f.right)
    if f.kind in _RIGHT_ASSOC:
        if _level(f.left) <= lvl:
            ls = f"({ls})"
        if _level(f.right) < lvl:
            rs = f"({rs})"
    else:
        if _level(f.left) < lvl:
            ls = f"({ls})"
        if _level(f.right) <= lvl:
            rs = f"({rs})"
    return f"{ls} {f.kind} {rs}"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_]*)|([!&|()]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1) or m.group(2) or m.group(3)
        toks.append((tok, m.start(m.lastindex)))
        pos = m.end()
    toks.append(("", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, names: Optional[set[str]]):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = names

    def peek(self) -> str:
        return self.toks[self.i][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            what = repr(tok) if tok else "end of input"
            raise FormulaSyntaxError(f"expected {expected!r}, got {what}", self.pos())
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        if self.peek() != "":
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def implication(self) -> Formula:
        lhs = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Formula("->", lhs, self.implication())
        return lhs

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Formula("|", f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.until()
        while self.peek() == "&":
            self.take()
            f = Formula("&", f, self.until())
        return f

    def until(self) -> Formula:
        lhs = self.unary()
        if self.peek() == "U":
            self.take()
            return Formula("U", lhs, self.until())
        return lhs

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in UNARY:
            self.take()
            return Formula(tok, self.unary())
        if tok == "(":
            self.take()
            f = self.implication()
            self.take(")")
            return f
        if tok and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) and tok not in RESERVED:
            if self.names is not None and tok not in self.names:
                raise FormulaSyntaxError(f"unknown proposition {tok!r}", self.pos())
            self.take()
            return atom(tok)
        what = repr(tok) if tok else "end of input"
        raise FormulaSyntaxError(f"unexpected {what}", self.pos())


def parse_formula(text: str, ap: Optional[Sequence[Prop | str]] = None) -> Formula:
    """Parse ``text``; when ``ap`` is given every atom must be one of its names."""
    names = None
    if ap is not None:
        names = {p.name if isinstance(p, Prop) else p for p in ap}
    return _Parser(text, names).parse()
