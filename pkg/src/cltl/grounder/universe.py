"""Bounded universe of node slots and the structural variable families over it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from ..ltl.formula import OPERATORS, TEMPORAL
from .circuit import FALSE, TRUE
from .cnf import CnfSink


@dataclass(frozen=True)
class SymVal:
    """Symbolic set (arity 1) or relation (arity 2): tuple -> circuit node, absent = false."""
    arity: int
    entries: tuple[tuple[tuple[int, ...], int], ...]

    @staticmethod
    def make(arity: int, d: dict) -> "SymVal":
        return SymVal(arity, tuple(sorted((k, v) for k, v in d.items() if v != FALSE)))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def get(self, key: tuple) -> int:
        return self.as_dict().get(key, FALSE)


class SymbolicUniverse:
    """Slots ``0..n-1``; children of slot i live at smaller slots; root is the top used slot."""

    def __init__(self, n: int, ap: Sequence[str], sink: CnfSink | None = None,
                 consts: Sequence[str] = ()):
        if n < 1:
            raise ValueError("node bound must be at least 1")
        self.n = n
        self.ap = tuple(ap)
        self.kinds = tuple(OPERATORS) + self.ap
        self.sink = sink or CnfSink()
        self.c = self.sink.circuit
        self.consts = tuple(consts)
        # allocate structural variables in a fixed order
        for i in range(n):
            self.used_var(i)
        for i in range(n):
            for k in self.kinds:
                self.label_var(i, k)
        for i in range(n):
            for j in range(i):
                self.child_var("L", i, j)
                self.child_var("R", i, j)
        for name in self.consts:
            for i in range(n):
                self.const_var(name, i)
        self._atomic: dict[str, SymVal] | None = None

    # solver variables
    def used_var(self, i: int) -> int:
        return self.sink.var(("used", i))

    def label_var(self, i: int, kind: str) -> int:
        return self.sink.var(("label", i, kind))

    def child_var(self, side: str, i: int, j: int) -> int:
        if not 0 <= j < i < self.n:
            raise ValueError("child slots must be smaller than the parent")
        return self.sink.var(("child" + side, i, j))

    def const_var(self, name: str, i: int) -> int:
        return self.sink.var(("const", name, i))

    # circuit leaves
    def used(self, i: int) -> int:
        if i >= self.n:
            return FALSE
        return self.c.var(self.used_var(i))

    def label(self, i: int, kind: str) -> int:
        return self.c.var(self.label_var(i, kind))

    def child(self, side: str, i: int, j: int) -> int:
        if not 0 <= j < i:
            return FALSE
        return self.c.var(self.child_var(side, i, j))

    def const(self, name: str, i: int) -> int:
        return self.c.var(self.const_var(name, i))

    def root(self, i: int) -> int:
        return self.c.and_(self.used(i), -self.used(i + 1))

    def structural_vars(self) -> Iterator[int]:
        for m, v in self.sink.index.items():
            if m[0] in ("used", "label", "childL", "childR"):
                yield v

    # built-in constants
    def kind_set(self, kinds: Sequence[str]) -> SymVal:
        c = self.c
        return SymVal.make(1, {(i,): c.or_([c.and_(self.label(i, k), self.used(i)) for k in kinds])
                               for i in range(self.n)})

    def atomic_values(self) -> dict[str, SymVal]:
        if self._atomic is None:
            n = self.n
            self._atomic = {
                "root": SymVal.make(1, {(i,): self.root(i) for i in range(n)}),
                "Nodes": SymVal.make(1, {(i,): self.used(i) for i in range(n)}),
                "L": SymVal.make(2, {(i, j): self.child("L", i, j) for i in range(n) for j in range(i)}),
                "R": SymVal.make(2, {(i, j): self.child("R", i, j) for i in range(n) for j in range(i)}),
                "AP": self.kind_set(self.ap),
                "Temporal": self.kind_set(TEMPORAL),
                "none": SymVal.make(1, {}),
            }
        return self._atomic

    def const_value(self, name: str) -> SymVal:
        return SymVal.make(1, {(i,): self.const(name, i) for i in range(self.n)})

    def singleton(self, i: int) -> SymVal:
        return SymVal.make(1, {(i,): TRUE})
