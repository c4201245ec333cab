"""AST for syntactic constraints and objectives over a formula's syntax DAG."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

# -- expressions ---------------------------------------------------------------

# Built-in constant names. ``N[...]`` sets are ``Kinds``.
CONSTANTS = ("root", "Nodes", "L", "R", "AP", "Temporal", "none")


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Kinds:
    """``N[k1, k2, ...]``: nodes labelled by any of the given kinds/propositions."""
    kinds: tuple[str, ...]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NodeConst:
    """A declared node instance (existentially witnessed)."""
    name: str


@dataclass(frozen=True)
class RelRef:
    name: str


@dataclass(frozen=True)
class TupleLit:
    """Explicit set of tuples over node-valued expressions, e.g. ``{(a, b), (b, c)}``."""
    tuples: tuple[tuple["Expr", ...], ...]


@dataclass(frozen=True)
class Comprehension:
    vars: tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class BinExpr:
    op: str  # "+", "&", "-", "><", "."
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnExpr:
    op: str  # "^", "*", "~"
    arg: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


Expr = Union[Const, Kinds, Var, NodeConst, RelRef, TupleLit, Comprehension, BinExpr, UnExpr, Call]

# -- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Compare:
    op: str  # "in", "=", "!="
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Card:
    expr: Expr
    op: str  # "=", "!=", "<", ">", "<=", ">="
    bound: int


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class BinFormula:
    op: str  # "and", "or", "implies", "iff"
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    q: str  # "all", "some"
    vars: tuple[str, ...]
    domain: Expr
    body: "Formula"


Formula = Union[BoolConst, Compare, Card, Not, BinFormula, Quant]

# -- program -------------------------------------------------------------------


@dataclass(frozen=True)
class FuncDef:
    name: str
    param: str
    body: Expr


@dataclass(frozen=True)
class NodeDecl:
    name: str
    domain: Expr


@dataclass(frozen=True)
class Objective:
    kind: str  # "minimize", "maximize", "softempty", "soft"
    priority: int
    target: Union[Expr, Formula]


@dataclass
class Program:
    funcs: dict[str, FuncDef] = field(default_factory=dict)
    nodes: list[NodeDecl] = field(default_factory=list)
    rels: dict[str, Expr] = field(default_factory=dict)
    constraints: list[Formula] = field(default_factory=list)
    objectives: list[Objective] = field(default_factory=list)
    ap: tuple[str, ...] = ()

    def merged(self, other: "Program") -> "Program":
        """Concatenate two programs over the same propositions."""
        if self.ap and other.ap and tuple(self.ap) != tuple(other.ap):
            raise ValueError("programs use different propositions")
        clash = (set(self.funcs) & set(other.funcs)) | (set(self.rels) & set(other.rels)) \
            | ({d.name for d in self.nodes} & {d.name for d in other.nodes})
        clash = {c for c in clash if not _same_def(self, other, c)}
        if clash:
            raise ValueError(f"conflicting definitions: {sorted(clash)}")
        out = Program(dict(self.funcs), list(self.nodes), dict(self.rels),
                      list(self.constraints), list(self.objectives), self.ap or other.ap)
        out.funcs.update(other.funcs)
        out.rels.update(other.rels)
        have = {d.name for d in out.nodes}
        out.nodes.extend(d for d in other.nodes if d.name not in have)
        out.constraints.extend(other.constraints)
        out.objectives.extend(other.objectives)
        return out

    @property
    def node_names(self) -> list[str]:
        return [d.name for d in self.nodes]

    def layers(self) -> list[tuple[int, list[Objective]]]:
        """Objectives grouped by priority, highest first."""
        by: dict[int, list[Objective]] = {}
        for o in self.objectives:
            by.setdefault(o.priority, []).append(o)
        return sorted(by.items(), key=lambda kv: -kv[0])


def _same_def(a: Program, b: Program, name: str) -> bool:
    for table in ("funcs", "rels"):
        x, y = getattr(a, table).get(name), getattr(b, table).get(name)
        if x is not None or y is not None:
            return x == y
    da = next((d for d in a.nodes if d.name == name), None)
    db = next((d for d in b.nodes if d.name == name), None)
    return da == db


def is_formula(x) -> bool:
    return isinstance(x, (BoolConst, Compare, Card, Not, BinFormula, Quant))


__all__ = [
    "CONSTANTS", "BinExpr", "BinFormula", "BoolConst", "Call", "Card", "Compare", "Comprehension",
    "Const", "Expr", "Formula", "FuncDef", "Kinds", "NodeConst", "NodeDecl", "Not", "Objective",
    "Program", "Quant", "RelRef", "TupleLit", "UnExpr", "Var", "is_formula",
]
