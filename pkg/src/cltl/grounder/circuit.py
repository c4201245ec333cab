"""Hash-consed Boolean circuits.

A node is a nonzero int; ``-x`` is the negation of ``x``. ``TRUE`` is 1 and
``FALSE`` is -1. Structurally equal AND/IFF nodes are created once, so node
identity doubles as structural equality and the Tseitin cache key.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Union

TRUE = 1
FALSE = -1


class Circuit:
    def __init__(self):
        # index 0 unused, index 1 is the constant
        self.nodes: list[tuple] = [("pad",), ("true",)]
        self._table: dict[tuple, int] = {}

    def __len__(self) -> int:
        return len(self.nodes) - 1

    def _mk(self, key: tuple) -> int:
        node = self._table.get(key)
        if node is None:
            self.nodes.append(key)
            node = len(self.nodes) - 1
            self._table[key] = node
        return node

    def var(self, v: int) -> int:
        """Leaf for solver variable ``v`` (positive int)."""
        if v <= 0:
            raise ValueError("solver variables are positive")
        return self._mk(("var", v))

    def lit(self, lit: int) -> int:
        return self.var(lit) if lit > 0 else -self.var(-lit)

    @staticmethod
    def not_(x: int) -> int:
        return -x

    def and_(self, *xs: Union[int, Iterable[int]]) -> int:
        args: set[int] = set()
        for x in _flat(xs):
            if x == FALSE:
                return FALSE
            if x == TRUE:
                continue
            if -x in args:
                return FALSE
            args.add(x)
        if not args:
            return TRUE
        if len(args) == 1:
            return next(iter(args))
        return self._mk(("and", tuple(sorted(args))))

    def or_(self, *xs: Union[int, Iterable[int]]) -> int:
        return -self.and_(*(-x for x in _flat(xs)))

    def implies(self, a: int, b: int) -> int:
        return self.or_(-a, b)

    def iff(self, a: int, b: int) -> int:
        if a == b:
            return TRUE
        if a == -b:
            return FALSE
        if abs(a) == TRUE:
            return b if a == TRUE else -b
        if abs(b) == TRUE:
            return a if b == TRUE else -a
        sign = (1 if a > 0 else -1) * (1 if b > 0 else -1)
        a, b = sorted((abs(a), abs(b)))
        return sign * self._mk(("iff", a, b))

    def ite(self, c: int, t: int, e: int) -> int:
        return self.or_(self.and_(c, t), self.and_(-c, e))

    def at_least(self, xs: list[int], k: int) -> list[int]:
        """Sequential-counter outputs ``out[j]`` = "at least j of xs", j=0..k."""
        out = [TRUE] + [FALSE] * k
        for x in xs:
            if x == FALSE:
                continue
            for j in range(k, 0, -1):
                out[j] = self.or_(out[j], self.and_(x, out[j - 1]))
        return out

    def evaluate(self, x: int, assignment: Union[Mapping[int, bool], Callable[[int], bool]],
                 memo: dict | None = None) -> bool:
        get = assignment if callable(assignment) else assignment.__getitem__
        memo = {} if memo is None else memo
        stack = [abs(x)]
        while stack:
            n = stack[-1]
            if n in memo:
                stack.pop()
                continue
            key = self.nodes[n]
            op = key[0]
            if op == "true":
                memo[n] = True
            elif op == "var":
                memo[n] = bool(get(key[1]))
            else:
                kids = key[1:] if op == "iff" else key[1]
                pending = [abs(c) for c in kids if abs(c) not in memo]
                if pending:
                    stack.extend(pending)
                    continue
                vals = [memo[abs(c)] if c > 0 else not memo[abs(c)] for c in kids]
                memo[n] = all(vals) if op == "and" else vals[0] == vals[1]
            stack.pop()
        v = memo[abs(x)]
        return v if x > 0 else not v

    def support(self, x: int) -> set[int]:
        """Solver variables occurring under ``x``."""
        seen, out, stack = set(), set(), [abs(x)]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            key = self.nodes[n]
            if key[0] == "var":
                out.add(key[1])
            elif key[0] == "and":
                stack.extend(abs(c) for c in key[1])
            elif key[0] == "iff":
                stack.extend((key[1], key[2]))
        return out


def _flat(xs) -> Iterable[int]:
    for x in xs:
        if isinstance(x, int):
            yield x
        else:
            yield from x
