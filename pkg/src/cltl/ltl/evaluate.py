"""Two independent LTL evaluators over lasso traces.

``truth_table`` works bottom-up with explicit walks along ``succ``;
``evaluate_fixpoint`` iterates the expansion laws of F, G and U from the
least/greatest starting point until nothing changes. They share no code
beyond the trace successor function.
"""

from __future__ import annotations

from typing import Union

from .dag import SyntaxDag, formula_to_dag
from .formula import Formula
from .trace import LassoTrace, future_indices, succ

Table = dict[int, list[bool]]


def _as_dag(d: Union[SyntaxDag, Formula]) -> SyntaxDag:
    return formula_to_dag(d) if isinstance(d, Formula) else d


def _atom_row(t: LassoTrace, label: str) -> list[bool]:
    try:
        col = t.ap.index(label)
    except ValueError:
        raise KeyError(f"unknown proposition {label!r}") from None
    return [s[col] for s in t.states]


def truth_table(d: Union[SyntaxDag, Formula], t: LassoTrace) -> Table:
    """Truth value of every reachable node at every position of ``uv``."""
    d = _as_dag(d)
    n = len(t.states)
    nxt = [succ(t, k) for k in range(n)]
    fut = [future_indices(t, k) for k in range(n)]
    table: Table = {}
    for i in d.reachable():
        lab = d.labels[i]
        a = table[d.left[i]] if d.left[i] is not None else None
        b = table[d.right[i]] if d.right[i] is not None else None
        if lab == "!":
            row = [not x for x in a]
        elif lab == "&":
            row = [x and y for x, y in zip(a, b)]
        elif lab == "|":
            row = [x or y for x, y in zip(a, b)]
        elif lab == "->":
            row = [(not x) or y for x, y in zip(a, b)]
        elif lab == "X":
            row = [a[nxt[k]] for k in range(n)]
        elif lab == "F":
            row = [any(a[j] for j in fut[k]) for k in range(n)]
        elif lab == "G":
            row = [all(a[j] for j in fut[k]) for k in range(n)]
        elif lab == "U":
            row = []
            for k in range(n):
                val = False
                for j in fut[k]:
                    if b[j]:
                        val = True
                        break
                    if not a[j]:
                        break
                row.append(val)
        else:
            row = _atom_row(t, lab)
        table[i] = row
    return table


def evaluate(d: Union[SyntaxDag, Formula], t: LassoTrace, i: int = 0) -> bool:
    d = _as_dag(d)
    if not 0 <= i < len(t.states):
        raise IndexError(f"position {i} outside 0..{len(t.states) - 1}")
    return truth_table(d, t)[d.root][i]


def evaluate_fixpoint(d: Union[SyntaxDag, Formula], t: LassoTrace) -> Table:
    """Oracle: F/U start all-false, G all-true; sweep expansion laws to a fixpoint.

    F a = a | X F a,  G a = a & X G a,  a U b = b | (a & X(a U b)).
    """
    d = _as_dag(d)
    n = len(t.states)
    nxt = [succ(t, k) for k in range(n)]
    table: Table = {}
    for i in d.reachable():
        lab = d.labels[i]
        a = table.get(d.left[i]) if d.left[i] is not None else None
        b = table.get(d.right[i]) if d.right[i] is not None else None
        if lab in ("F", "G", "U"):
            row = [lab == "G"] * n
            for _ in range(n + 1):
                changed = False
                for k in range(n):
                    if lab == "F":
                        v = a[k] or row[nxt[k]]
                    elif lab == "G":
                        v = a[k] and row[nxt[k]]
                    else:
                        v = b[k] or (a[k] and row[nxt[k]])
                    if v != row[k]:
                        row[k] = v
                        changed = True
                if not changed:
                    break
            else:
                raise RuntimeError("fixpoint iteration did not converge")
        elif lab == "X":
            row = [a[nxt[k]] for k in range(n)]
        elif lab == "!":
            row = [not x for x in a]
        elif lab == "&":
            row = [x and y for x, y in zip(a, b)]
        elif lab == "|":
            row = [x or y for x, y in zip(a, b)]
        elif lab == "->":
            row = [(not x) or y for x, y in zip(a, b)]
        else:
            row = _atom_row(t, lab)
        table[i] = row
    return table


def consistent(f: Union[SyntaxDag, Formula], sample) -> bool:
    d = _as_dag(f)
    return all(evaluate(d, t, 0) == label for t, label in sample.traces)
