"""Concrete evaluation of constraint programs against a syntax DAG.

Values are frozensets of tuples: ``{(i,)}`` for node sets, ``{(i, j)}`` for
relations. Only nodes reachable from the root exist.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ..ltl.dag import SyntaxDag
from ..ltl.formula import TEMPORAL, Formula as LtlFormula
from .ast import (BinExpr, BinFormula, BoolConst, Call, Card, Compare, Comprehension, Const, Expr,
                  Formula, Kinds, NodeConst, Not, Objective, Program, Quant, RelRef, TupleLit,
                  UnExpr, Var)
from .parser import BUILTIN_FUNCS

Value = frozenset

CMP = {
    "=": lambda a, b: a == b, "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b, ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b, ">=": lambda a, b: a >= b,
}


def join(a: Value, b: Value) -> Value:
    by_first: dict[int, list[tuple]] = {}
    for t in b:
        by_first.setdefault(t[0], []).append(t[1:])
    return frozenset(x[:-1] + y for x in a for y in by_first.get(x[-1], ()))


def closure(r: Value) -> Value:
    out = set(r)
    while True:
        new = out | join(frozenset(out), frozenset(out))
        if new == out:
            return frozenset(out)
        out = new


class Evaluator:
    def __init__(self, d: SyntaxDag, prog: Optional[Program] = None,
                 binding: Optional[Mapping[str, int]] = None):
        if isinstance(d, LtlFormula):
            from ..ltl.dag import formula_to_dag
            d = formula_to_dag(d)
        self.d = d
        self.prog = prog or Program()
        self.binding = dict(binding or {})
        self.nodes = list(d.reachable())
        self.funcs = dict(BUILTIN_FUNCS)
        self.funcs.update(self.prog.funcs)
        self._rels: dict[str, Value] = {}
        lab = d.labels
        self.base = {
            "root": frozenset({(d.root,)}),
            "Nodes": frozenset((i,) for i in self.nodes),
            "L": frozenset((i, d.left[i]) for i in self.nodes if d.left[i] is not None),
            "R": frozenset((i, d.right[i]) for i in self.nodes if d.right[i] is not None),
            "AP": frozenset((i,) for i in self.nodes if _is_prop(lab[i])),
            "Temporal": frozenset((i,) for i in self.nodes if lab[i] in TEMPORAL),
            "none": frozenset(),
        }

    def expr(self, e: Expr, env: Optional[dict] = None) -> Value:
        env = env or {}
        if isinstance(e, Const):
            return self.base[e.name]
        if isinstance(e, Kinds):
            ks = set(e.kinds)
            return frozenset((i,) for i in self.nodes if self.d.labels[i] in ks)
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, NodeConst):
            return frozenset({(self.binding[e.name],)})
        if isinstance(e, RelRef):
            if e.name not in self._rels:
                self._rels[e.name] = self.expr(self.prog.rels[e.name])
            return self._rels[e.name]
        if isinstance(e, TupleLit):
            out: set = set()
            for t in e.tuples:
                parts = [self.expr(x, env) for x in t]
                for combo in itertools.product(*parts):
                    out.add(sum(combo, ()))
            return frozenset(out)
        if isinstance(e, Comprehension):
            out = set()
            for combo in itertools.product(self.nodes, repeat=len(e.vars)):
                inner = dict(env)
                inner.update({v: frozenset({(i,)}) for v, i in zip(e.vars, combo)})
                if self.formula(e.body, inner):
                    out.add(combo)
            return frozenset(out)
        if isinstance(e, BinExpr):
            a, b = self.expr(e.left, env), self.expr(e.right, env)
            if e.op == "+":
                return a | b
            if e.op == "&":
                return a & b
            if e.op == "-":
                return a - b
            if e.op == "><":
                return frozenset(x + y for x in a for y in b)
            return join(a, b)
        if isinstance(e, UnExpr):
            a = self.expr(e.arg, env)
            if e.op == "~":
                return frozenset((y, x) for x, y in a)
            c = closure(a)
            if e.op == "*":
                c = c | frozenset((i, i) for i in self.nodes)
            return c
        if isinstance(e, Call):
            f = self.funcs[e.name]
            return self.expr(f.body, {f.param: self.expr(e.arg, env)})
        raise TypeError(f"not an expression: {e!r}")

    def formula(self, f: Formula, env: Optional[dict] = None) -> bool:
        env = env or {}
        if isinstance(f, BoolConst):
            return f.value
        if isinstance(f, Compare):
            a, b = self.expr(f.left, env), self.expr(f.right, env)
            if f.op == "in":
                return a <= b
            return (a == b) if f.op == "=" else (a != b)
        if isinstance(f, Card):
            return CMP[f.op](len(self.expr(f.expr, env)), f.bound)
        if isinstance(f, Not):
            return not self.formula(f.arg, env)
        if isinstance(f, BinFormula):
            a = self.formula(f.left, env)
            if f.op == "and":
                return a and self.formula(f.right, env)
            if f.op == "or":
                return a or self.formula(f.right, env)
            if f.op == "implies":
                return (not a) or self.formula(f.right, env)
            return a == self.formula(f.right, env)
        if isinstance(f, Quant):
            dom = sorted(self.expr(f.domain, env))
            test = any if f.q == "some" else all
            return test(self.formula(f.body, {**env, **{v: frozenset({(i,)}) for v, i in zip(f.vars, t)}})
                        for t in dom)
        raise TypeError(f"not a formula: {f!r}")


def _is_prop(label: str) -> bool:
    from ..ltl.formula import OPERATORS
    return label not in OPERATORS


def eval_expr(e: Expr, d: SyntaxDag, binding: Optional[Mapping[str, object]] = None,
              prog: Optional[Program] = None) -> set:
    """Evaluate ``e``. Node sets come back as ``{i}``, relations as ``{(i, j)}``.

    ``binding`` maps free variables (and declared node constants) to node indices.
    """
    binding = dict(binding or {})
    consts = {k: v for k, v in binding.items() if prog is not None and k in prog.node_names}
    env = {k: frozenset({(v,)}) for k, v in binding.items() if k not in consts}
    val = Evaluator(d, prog, consts).expr(e, env)
    return {t[0] if len(t) == 1 else t for t in val}


def witnesses(prog: Program, d: SyntaxDag):
    """All assignments of declared node constants to distinct nodes in their domains."""
    names = prog.node_names
    if not names:
        yield {}
        return
    ev = Evaluator(d, prog)
    nodes = ev.nodes
    for combo in itertools.permutations(nodes, len(names)):
        b = dict(zip(names, combo))
        ev.binding = b
        ev._rels = {}
        if all((b[decl.name],) in ev.expr(decl.domain) for decl in prog.nodes):
            yield b


def holds(c: Formula, d: SyntaxDag, prog: Optional[Program] = None,
          binding: Optional[Mapping[str, int]] = None) -> bool:
    """Truth of ``c`` on ``d``; declared node constants are existentially witnessed."""
    prog = prog or Program()
    if binding is not None:
        return Evaluator(d, prog, binding).formula(c)
    return any(Evaluator(d, prog, b).formula(c) for b in witnesses(prog, d))


def universe_bound(o: Objective, n: int, prog: Optional[Program] = None) -> int:
    from .parser import Checker
    arity = Checker(prog or Program(), (prog.ap if prog else ())).arity(o.target, {})
    return n * n if arity == 2 else n


def objective_cost(o: Objective, d: SyntaxDag, prog: Optional[Program] = None,
                   binding: Optional[Mapping[str, int]] = None, n: Optional[int] = None) -> int:
    """Cost to minimize: |e| for minimize/softempty, bound - |e| for maximize, 0/1 for soft."""
    prog = prog or Program()
    if binding is None:
        binding = next(witnesses(prog, d), {})
    ev = Evaluator(d, prog, binding)
    if o.kind == "soft":
        return 0 if ev.formula(o.target) else 1
    size = len(ev.expr(o.target))
    if o.kind == "maximize":
        n = len(ev.nodes) if n is None else n
        return universe_bound(o, n, prog) - size
    return size


@dataclass
class ProgramVerdict:
    witness: Optional[dict]
    constraints: list[bool]
    costs: list[tuple[int, int]]  # (priority, cost), highest priority first

    @property
    def ok(self) -> bool:
        return self.witness is not None and all(self.constraints)


def evaluate_program(prog: Program, d: SyntaxDag, n: Optional[int] = None,
                     extra_objectives: Sequence[Objective] = ()) -> ProgramVerdict:
    """Check all hard constraints and cost every objective layer.

    Among witnesses for the node constants that satisfy every constraint, the
    one with the lexicographically smallest layer costs is reported. If none
    satisfies all constraints, each verdict says whether that constraint alone
    has a witness.
    """
    objs = list(prog.objectives) + list(extra_objectives)
    layers: dict[int, list[Objective]] = {}
    for o in objs:
        layers.setdefault(o.priority, []).append(o)
    order = sorted(layers, reverse=True)

    def costs_for(b):
        return [(k, sum(objective_cost(o, d, prog, b, n) for o in layers[k])) for k in order]

    best = None
    ws = list(witnesses(prog, d))
    for b in ws:
        ev = Evaluator(d, prog, b)
        if all(ev.formula(c) for c in prog.constraints):
            cs = costs_for(b)
            if best is None or [c for _, c in cs] < [c for _, c in best[1]]:
                best = (b, cs)
    if best is not None:
        return ProgramVerdict(best[0], [True] * len(prog.constraints), best[1])
    verdicts = [any(Evaluator(d, prog, b).formula(c) for b in ws) for c in prog.constraints]
    return ProgramVerdict(None, verdicts, costs_for(ws[0]) if ws else [])
