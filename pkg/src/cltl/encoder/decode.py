"""Models to syntax DAGs, and syntax DAGs back to full assignments."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from ..constraints.semantics import evaluate_program
from ..ltl.dag import SyntaxDag, formula_to_dag, slot_orders
from ..ltl.evaluate import evaluate, truth_table
from ..ltl.formula import Formula
from .encode import ProblemCnf


class DecodeError(RuntimeError):
    """The model does not describe a valid DAG; always an encoder bug."""


def model_dict(model: Sequence[int] | Mapping[int, bool]) -> dict[int, bool]:
    if isinstance(model, Mapping):
        return dict(model)
    return {abs(l): l > 0 for l in model}


def decode(model, p: ProblemCnf, check: bool = True) -> SyntaxDag:
    """Read used prefix, labels and child edges; the root is the top used slot."""
    m = model_dict(model)
    u, vm = p.universe, p.varmap
    size = 0
    while size < u.n and m.get(vm[("used", size)], False):
        size += 1
    if size == 0:
        raise DecodeError("no used slots")
    labels, left, right = [], [], []
    for i in range(size):
        labs = [k for k in u.kinds if m.get(vm[("label", i, k)], False)]
        if len(labs) != 1:
            raise DecodeError(f"slot {i} has labels {labs}")
        labels.append(labs[0])
        ls = [j for j in range(i) if m.get(vm[("childL", i, j)], False)]
        rs = [j for j in range(i) if m.get(vm[("childR", i, j)], False)]
        if len(ls) > 1 or len(rs) > 1:
            raise DecodeError(f"slot {i} has several children on one side")
        left.append(ls[0] if ls else None)
        right.append(rs[0] if rs else None)
    try:
        d = SyntaxDag(tuple(labels), tuple(left), tuple(right), size - 1)
    except ValueError as e:
        raise DecodeError(str(e)) from e
    if check:
        if len(d.reachable()) != size:
            raise DecodeError("used slots not reachable from the root")
        for t, (tr, _) in enumerate(p.config.sample.traces):
            v = vm.get(("sem", t, size - 1, 0))
            if v is not None and m.get(v, False) != evaluate(d, tr, 0):
                raise DecodeError(f"solver and evaluator disagree on trace {t}")
    return d


def const_placement(model, p: ProblemCnf) -> dict[str, int]:
    m = model_dict(model)
    out = {}
    for name in p.program.node_names:
        for i in range(p.universe.n):
            if m.get(p.varmap[("const", name, i)], False):
                out[name] = i
    return out


def assignment_from_dag(f: Formula | SyntaxDag, p: ProblemCnf,
                        witness: Optional[Mapping[str, int]] = None,
                        order_limit: int = 1) -> Optional[dict[int, bool]]:
    """Total assignment for ``p``'s variables describing the DAG of ``f``.

    Nodes are placed with the encoder's layout (atoms first, then a topological
    order). Semantic variables come from the evaluator, Tseitin variables from
    evaluating their circuits. Returns None if the DAG does not fit the bound.
    """
    d = formula_to_dag(f) if isinstance(f, Formula) else f
    u, vm, sink = p.universe, p.varmap, p.varmap.sink
    order = next(iter(slot_orders(d, list(u.ap), limit=order_limit)), None)
    if order is None or len(order) > u.n:
        return None
    slot = {node: s for s, node in enumerate(order)}
    a: dict[int, bool] = {v: False for v in range(1, sink.nvars + 1)}
    a[sink.true_lit] = True
    size = len(order)
    for s, node in enumerate(order):
        a[vm[("used", s)]] = True
        a[vm[("label", s, d.labels[node])]] = True
        if d.left[node] is not None:
            a[vm[("childL", s, slot[d.left[node]])]] = True
        if d.right[node] is not None:
            a[vm[("childR", s, slot[d.right[node]])]] = True
    if witness is None and p.program.nodes:
        relabeled = SyntaxDag(tuple(d.labels[order[s]] for s in range(size)),
                              tuple(slot[d.left[order[s]]] if d.left[order[s]] is not None else None
                                    for s in range(size)),
                              tuple(slot[d.right[order[s]]] if d.right[order[s]] is not None else None
                                    for s in range(size)),
                              size - 1)
        verdict = evaluate_program(p.program, relabeled, n=u.n)
        witness = verdict.witness or {}
        slot_witness = witness
    else:
        slot_witness = {k: slot[v] for k, v in (witness or {}).items()}
    for name, s in slot_witness.items():
        a[vm[("const", name, s)]] = True
    for t, (tr, _) in enumerate(p.config.sample.traces):
        table = truth_table(d, tr)
        for s, node in enumerate(order):
            for k in range(len(tr)):
                a[vm[("sem", t, s, k)]] = table[node][k]
            if s == 0:
                continue
            for side, kids in (("lv", d.left), ("rv", d.right)):
                child = kids[node]
                for k in range(len(tr)):
                    a[vm[(side, t, s, k)]] = child is not None and table[child][k]
    # Tseitin definitions, evaluated bottom-up through the circuit
    memo: dict = {}
    for node, lit in sorted(sink._lit.items(), key=lambda kv: abs(kv[1])):
        if sink.meaning.get(abs(lit), ("",))[0] == "aux":
            val = sink.circuit.evaluate(node, lambda v: a[v], memo)
            a[abs(lit)] = val if lit > 0 else not val
    return a


def unsatisfied(clauses: list[list[int]], a: Mapping[int, bool]) -> list[list[int]]:
    return [c for c in clauses if not any(a.get(abs(l), False) == (l > 0) for l in c)]
