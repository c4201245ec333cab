"""Tseitin conversion of circuits into a clause list with named variables."""

from __future__ import annotations

from typing import Hashable, Iterable, Optional

from .circuit import FALSE, TRUE, Circuit


class CnfSink:
    """Clause store plus a bidirectional map between solver variables and meanings.

    Meanings are tuples such as ``("label", 3, "G")``; Tseitin auxiliaries get
    ``("aux", k)``. Every distinct circuit node is defined at most once, with a
    full biimplication so the defining literal can be used in both polarities.
    """

    def __init__(self, circuit: Optional[Circuit] = None):
        self.circuit = circuit or Circuit()
        self.clauses: list[list[int]] = []
        self.nvars = 0
        self.meaning: dict[int, tuple] = {}
        self.index: dict[Hashable, int] = {}
        self._lit: dict[int, int] = {}
        self.true_lit = self.var(("true",))
        self.clauses.append([self.true_lit])

    # -- variables
    def new_var(self, meaning: Optional[tuple] = None) -> int:
        self.nvars += 1
        v = self.nvars
        m = meaning if meaning is not None else ("aux", v)
        self.meaning[v] = m
        self.index[m] = v
        return v

    def var(self, meaning: tuple) -> int:
        v = self.index.get(meaning)
        return v if v is not None else self.new_var(meaning)

    def node(self, meaning: tuple) -> int:
        """Circuit leaf for the variable with this meaning."""
        return self.circuit.var(self.var(meaning))

    def add_clause(self, lits: Iterable[int]):
        self.clauses.append(list(lits))

    # -- Tseitin
    def to_cnf(self, b: int) -> int:
        """Literal equivalent to circuit node ``b``; emits definitions as needed."""
        if b == TRUE:
            return self.true_lit
        if b == FALSE:
            return -self.true_lit
        root = abs(b)
        if root not in self._lit:
            nodes = self.circuit.nodes
            stack = [root]
            while stack:
                n = stack[-1]
                if n in self._lit:
                    stack.pop()
                    continue
                key = nodes[n]
                if key[0] == "var":
                    self._lit[n] = key[1]
                    stack.pop()
                    continue
                kids = key[1] if key[0] == "and" else key[1:]
                pending = [abs(c) for c in kids if abs(c) not in self._lit and abs(c) != TRUE]
                if pending:
                    stack.extend(pending)
                    continue
                ls = [self._child_lit(c) for c in kids]
                t = self.new_var()
                if key[0] == "and":
                    for x in ls:
                        self.clauses.append([-t, x])
                    self.clauses.append([t] + [-x for x in ls])
                else:
                    a, c = ls
                    self.clauses += [[-t, -a, c], [-t, a, -c], [t, a, c], [t, -a, -c]]
                self._lit[n] = t
                stack.pop()
        lit = self._lit[root]
        return lit if b > 0 else -lit

    def _child_lit(self, c: int) -> int:
        if abs(c) == TRUE:
            return self.true_lit if c > 0 else -self.true_lit
        lit = self._lit[abs(c)]
        return lit if c > 0 else -lit

    def assert_(self, b: int):
        """Add ``b`` as a hard constraint, splitting top-level conjunctions."""
        stack = [b]
        nodes = self.circuit.nodes
        while stack:
            x = stack.pop()
            if x == TRUE:
                continue
            if x == FALSE:
                self.clauses.append([])
                continue
            key = nodes[abs(x)]
            if key[0] == "and" and x > 0:
                stack.extend(key[1])
            elif key[0] == "and":
                # negated conjunction: one clause over the negated parts
                self.clauses.append([self.to_cnf(-c) for c in key[1]])
            else:
                self.clauses.append([self.to_cnf(x)])

    def model_value(self, model: dict[int, bool], b: int) -> bool:
        return self.circuit.evaluate(b, lambda v: model.get(v, False))
