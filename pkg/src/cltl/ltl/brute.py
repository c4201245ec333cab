"""Exhaustive enumeration of formulas by tree size (testing oracle)."""

from __future__ import annotations

from typing import Callable, Iterator, Optional, Sequence

from .evaluate import evaluate
from .formula import BINARY, UNARY, Formula, atom
from .trace import Sample


def formulas_of_size(ap: Sequence[str], size: int,
                     _memo: Optional[dict] = None) -> list[Formula]:
    """All formula trees over ``ap`` with exactly ``size`` nodes."""
    memo = {} if _memo is None else _memo
    if size in memo:
        return memo[size]
    out: list[Formula] = []
    if size == 1:
        out = [atom(p) for p in ap]
    elif size >= 2:
        for op in UNARY:
            out.extend(Formula(op, sub) for sub in formulas_of_size(ap, size - 1, memo))
        for ls in range(1, size - 1):
            lefts = formulas_of_size(ap, ls, memo)
            rights = formulas_of_size(ap, size - 1 - ls, memo)
            for op in BINARY:
                out.extend(Formula(op, a, b) for a in lefts for b in rights)
    memo[size] = out
    return out


def enumerate_formulas(ap: Sequence[str], max_size: int) -> Iterator[Formula]:
    memo: dict = {}
    for size in range(1, max_size + 1):
        yield from formulas_of_size(ap, size, memo)


def _semantic_layers(sample: Sample, max_size: int):
    """Formulas by size, keeping one representative per behaviour on the sample.

    The behaviour of a formula is its truth vector at every position of every
    trace; operators act on behaviours, so minimal sizes are preserved.
    """
    traces = [t for t, _ in sample.traces]
    ap = list(sample.ap)
    nxt = [[k + 1 if k < len(t) - 1 else t.loop_start for k in range(len(t))] for t in traces]
    fut = [[t.future(k) for k in range(len(t))] for t in traces]

    def apply(op, a, b):
        rows = []
        for ti in range(len(traces)):
            x = a[ti]
            y = b[ti] if b is not None else None
            n = len(x)
            if op == "!":
                r = tuple(not v for v in x)
            elif op == "X":
                r = tuple(x[nxt[ti][k]] for k in range(n))
            elif op == "F":
                r = tuple(any(x[j] for j in fut[ti][k]) for k in range(n))
            elif op == "G":
                r = tuple(all(x[j] for j in fut[ti][k]) for k in range(n))
            elif op == "&":
                r = tuple(u and v for u, v in zip(x, y))
            elif op == "|":
                r = tuple(u or v for u, v in zip(x, y))
            elif op == "->":
                r = tuple((not u) or v for u, v in zip(x, y))
            else:  # U
                r = []
                for k in range(n):
                    val = False
                    for j in fut[ti][k]:
                        if y[j]:
                            val = True
                            break
                        if not x[j]:
                            break
                    r.append(val)
                r = tuple(r)
            rows.append(r)
        return tuple(rows)

    seen: set = set()
    layers: dict[int, list] = {}
    for size in range(1, max_size + 1):
        layer = []
        if size == 1:
            for p in ap:
                col = ap.index(p)
                beh = tuple(tuple(s[col] for s in t.states) for t in traces)
                if beh not in seen:
                    seen.add(beh)
                    layer.append((atom(p), beh))
        else:
            for op in UNARY:
                for f, b in layers[size - 1]:
                    nb = apply(op, b, None)
                    if nb not in seen:
                        seen.add(nb)
                        layer.append((Formula(op, f), nb))
            for ls in range(1, size - 1):
                for op in BINARY:
                    for fa, ba in layers[ls]:
                        for fb, bb in layers[size - 1 - ls]:
                            nb = apply(op, ba, bb)
                            if nb not in seen:
                                seen.add(nb)
                                layer.append((Formula(op, fa, fb), nb))
        layers[size] = layer
        yield size, layer


def brute_force_min_consistent(sample: Sample, max_tree_size: int,
                               shape_filter: Optional[Callable[[Formula], bool]] = None
                               ) -> Optional[Formula]:
    """Smallest formula (by tree size) consistent with ``sample``.

    Without a shape filter, formulas with identical behaviour on the sample are
    merged, which keeps the search tractable without changing the minimum.
    With a filter every tree is enumerated and evaluated.
    """
    if max_tree_size < 1:
        raise ValueError("max_tree_size must be at least 1")
    labels = [lab for _, lab in sample.traces]
    if shape_filter is None:
        for _, layer in _semantic_layers(sample, max_tree_size):
            for f, beh in layer:
                if all(row[0] == lab for row, lab in zip(beh, labels)):
                    return f
        return None

    for f in enumerate_formulas(list(sample.ap), max_tree_size):
        if all(evaluate(f, t, 0) == lab for t, lab in sample.traces) and shape_filter(f):
            return f
    return None
