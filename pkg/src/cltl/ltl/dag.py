"""Syntax DAGs: formula trees with (optionally) shared sub-formulas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .formula import BINARY, UNARY, Formula, atom


@dataclass(frozen=True)
class SyntaxDag:
    """Labels plus partial left/right child maps; nodes are indices.

    A label is an operator kind or a proposition name.
    """

    labels: tuple[str, ...]
    left: tuple[Optional[int], ...]
    right: tuple[Optional[int], ...]
    root: int

    def __post_init__(self):
        n = len(self.labels)
        if not (len(self.left) == len(self.right) == n):
            raise ValueError("labels/left/right length mismatch")
        if not 0 <= self.root < n:
            raise ValueError(f"root {self.root} out of range")
        for i, lab in enumerate(self.labels):
            lc, rc = self.left[i], self.right[i]
            for c in (lc, rc):
                if c is not None and not 0 <= c < n:
                    raise ValueError(f"child {c} of node {i} out of range")
            if lab in BINARY:
                ok = lc is not None and rc is not None
            elif lab in UNARY:
                ok = lc is not None and rc is None
            else:
                ok = lc is None and rc is None
            if not ok:
                raise ValueError(f"node {i} ({lab}) has wrong arity")
        if not self.is_acyclic():
            raise ValueError("syntax DAG has a cycle")

    def __len__(self) -> int:
        return len(self.labels)

    def children(self, i: int) -> tuple[int, ...]:
        return tuple(c for c in (self.left[i], self.right[i]) if c is not None)

    def is_acyclic(self) -> bool:
        state = [0] * len(self.labels)  # 0 new, 1 on stack, 2 done
        for s in range(len(self.labels)):
            if state[s]:
                continue
            stack = [(s, iter(self.children(s)))]
            state[s] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                elif state[nxt] == 1:
                    return False
                elif state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(self.children(nxt))))
        return True

    def reachable(self) -> list[int]:
        """Nodes reachable from the root, children before parents."""
        order: list[int] = []
        seen = set()

        def visit(i):
            if i in seen:
                return
            seen.add(i)
            for c in self.children(i):
                visit(c)
            order.append(i)

        visit(self.root)
        return order

    def parents(self, i: int) -> list[int]:
        return [j for j in range(len(self)) if i in self.children(j)]

    def edges(self) -> tuple[set[tuple[int, int]], set[tuple[int, int]]]:
        reach = set(self.reachable())
        lrel = {(i, self.left[i]) for i in reach if self.left[i] is not None}
        rrel = {(i, self.right[i]) for i in reach if self.right[i] is not None}
        return lrel, rrel

    def to_formula(self) -> Formula:
        return dag_to_formula(self)

    def __str__(self) -> str:
        return str(self.to_formula())


def formula_to_dag(f: Formula, share: bool = True) -> SyntaxDag:
    """Number nodes children-first; with ``share`` identical subtrees merge."""
    labels: list[str] = []
    left: list[Optional[int]] = []
    right: list[Optional[int]] = []
    memo: dict[Formula, int] = {}

    def build(g: Formula) -> int:
        if share and g in memo:
            return memo[g]
        lc = build(g.left) if g.left is not None else None
        rc = build(g.right) if g.right is not None else None
        labels.append(g.name if g.is_atom else g.kind)
        left.append(lc)
        right.append(rc)
        idx = len(labels) - 1
        memo[g] = idx
        return idx

    root = build(f)
    return SyntaxDag(tuple(labels), tuple(left), tuple(right), root)


def dag_to_formula(d: SyntaxDag) -> Formula:
    memo: dict[int, Formula] = {}
    for i in d.reachable():
        lab = d.labels[i]
        if lab in UNARY:
            memo[i] = Formula(lab, memo[d.left[i]])
        elif lab in BINARY:
            memo[i] = Formula(lab, memo[d.left[i]], memo[d.right[i]])
        else:
            memo[i] = atom(lab)
    return memo[d.root]


def dag_size(d: SyntaxDag) -> int:
    return len(d.reachable())


def canonical_key(d: SyntaxDag) -> tuple:
    """Isomorphism-invariant key of the reachable part of ``d``.

    Nodes are renumbered by first completion in a left-first post-order walk
    from the root, so two DAGs get equal keys iff they are isomorphic as
    labelled, rooted, ordered graphs (sharing structure included).
    """
    order = d.reachable()
    ren = {old: new for new, old in enumerate(order)}
    return tuple(
        (d.labels[i],
         ren[d.left[i]] if d.left[i] is not None else None,
         ren[d.right[i]] if d.right[i] is not None else None)
        for i in order
    )


def restrict(d: SyntaxDag) -> SyntaxDag:
    """Drop unreachable nodes, renumbering children-first."""
    order = d.reachable()
    ren = {old: new for new, old in enumerate(order)}
    return SyntaxDag(
        tuple(d.labels[i] for i in order),
        tuple(ren[d.left[i]] if d.left[i] is not None else None for i in order),
        tuple(ren[d.right[i]] if d.right[i] is not None else None for i in order),
        ren[d.root],
    )


def slot_orders(d: SyntaxDag, ap_order: list[str], limit: int = 5000) -> Iterator[list[int]]:
    """Yield placements of reachable nodes into slots 0..m-1.

    The placements follow the encoder's symmetry-breaking layout: proposition
    nodes occupy the lowest slots sorted by ``ap_order``, operator nodes follow
    in some topological order (children below parents) with the root last.
    Each yielded list maps slot -> node of ``d``. At most ``limit`` placements.
    """
    reach = d.reachable()
    rank = {p: k for k, p in enumerate(ap_order)}
    atoms = sorted((i for i in reach if d.labels[i] in rank), key=lambda i: rank[d.labels[i]])
    inner = [i for i in reach if d.labels[i] not in rank]
    count = 0

    # linear extensions of the child-before-parent order over operator nodes
    preds = {i: {c for c in d.children(i) if c in inner} for i in inner}

    def extend(prefix: list[int], remaining: set[int]):
        nonlocal count
        if count >= limit:
            return
        if not remaining:
            count += 1
            yield atoms + prefix
            return
        placed = set(prefix)
        for i in sorted(remaining):
            if preds[i] <= placed and (i != d.root or len(remaining) == 1):
                remaining.discard(i)
                prefix.append(i)
                yield from extend(prefix, remaining)
                prefix.pop()
                remaining.add(i)
                if count >= limit:
                    return

    yield from extend([], set(inner))

