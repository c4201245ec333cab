"""Grounding of relational expressions and first-order constraints into circuits."""

from __future__ import annotations

import itertools
import math
from typing import Optional

from ..constraints.ast import (BinExpr, BinFormula, BoolConst, Call, Card, Compare, Comprehension,
                               Const, Expr, Formula, Kinds, NodeConst, Not, Objective, Program, Quant,
                               RelRef, TupleLit, UnExpr, Var)
from ..constraints.parser import BUILTIN_FUNCS
from .circuit import FALSE, TRUE
from .universe import SymbolicUniverse, SymVal


def free_vars(x, _memo: dict = {}) -> frozenset:
    """Free quantifier/parameter variables of an expression or formula."""
    if x in _memo:
        return _memo[x]
    if isinstance(x, Var):
        out = frozenset({x.name})
    elif isinstance(x, (Const, Kinds, NodeConst, RelRef, BoolConst)):
        out = frozenset()
    elif isinstance(x, TupleLit):
        out = frozenset().union(*(free_vars(y) for t in x.tuples for y in t))
    elif isinstance(x, Comprehension):
        out = free_vars(x.body) - set(x.vars)
    elif isinstance(x, (BinExpr, BinFormula, Compare)):
        out = free_vars(x.left) | free_vars(x.right)
    elif isinstance(x, (UnExpr, Not)):
        out = free_vars(x.arg)
    elif isinstance(x, Call):
        out = free_vars(x.arg)
    elif isinstance(x, Card):
        out = free_vars(x.expr)
    elif isinstance(x, Quant):
        out = free_vars(x.domain) | (free_vars(x.body) - set(x.vars))
    else:
        raise TypeError(f"cannot ground {x!r}")
    _memo[x] = out
    return out


class Grounder:
    def __init__(self, u: SymbolicUniverse, prog: Optional[Program] = None):
        self.u = u
        self.c = u.c
        self.prog = prog or Program()
        self.funcs = dict(BUILTIN_FUNCS)
        self.funcs.update(self.prog.funcs)
        self._memo: dict = {}
        self._rels: dict[str, tuple[int, dict]] = {}

    # values are (arity, dict tuple -> node)
    def expr(self, e: Expr, env: Optional[dict] = None) -> tuple[int, dict]:
        env = env or {}
        fv = free_vars(e)
        key = (e, tuple((v, env[v][0], tuple(sorted(env[v][1].items()))) for v in sorted(fv)))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._expr(e, env)
            self._memo[key] = hit
        return hit

    def _expr(self, e: Expr, env: dict) -> tuple[int, dict]:
        c, u, n = self.c, self.u, self.u.n
        if isinstance(e, Const):
            v = u.atomic_values()[e.name]
            return v.arity, v.as_dict()
        if isinstance(e, Kinds):
            return 1, u.kind_set(e.kinds).as_dict()
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, NodeConst):
            return 1, u.const_value(e.name).as_dict()
        if isinstance(e, RelRef):
            if e.name not in self._rels:
                self._rels[e.name] = self.expr(self.prog.rels[e.name])
            return self._rels[e.name]
        if isinstance(e, TupleLit):
            acc: dict[tuple, list] = {}
            ar = len(e.tuples[0])
            for t in e.tuples:
                parts = [self.expr(x, env)[1] for x in t]
                for combo in itertools.product(*(p.items() for p in parts)):
                    k = sum((kv[0] for kv in combo), ())
                    acc.setdefault(k, []).append(c.and_(kv[1] for kv in combo))
            return ar, _compact({k: c.or_(v) for k, v in acc.items()})
        if isinstance(e, Comprehension):
            out = {}
            for combo in itertools.product(range(n), repeat=len(e.vars)):
                inner = dict(env)
                inner.update({v: (1, {(i,): TRUE}) for v, i in zip(e.vars, combo)})
                guard = c.and_(u.used(i) for i in combo)
                out[combo] = c.and_(guard, self.formula(e.body, inner))
            return len(e.vars), _compact(out)
        if isinstance(e, BinExpr):
            (a_ar, a), (b_ar, b) = self.expr(e.left, env), self.expr(e.right, env)
            if e.op == "+":
                return a_ar, _compact({k: c.or_(a.get(k, FALSE), b.get(k, FALSE)) for k in a.keys() | b.keys()})
            if e.op == "&":
                return a_ar, _compact({k: c.and_(a[k], b[k]) for k in a.keys() & b.keys()})
            if e.op == "-":
                return a_ar, _compact({k: c.and_(a[k], -b.get(k, FALSE)) for k in a})
            if e.op == "><":
                return 2, _compact({x + y: c.and_(va, vb) for x, va in a.items() for y, vb in b.items()})
            return a_ar + b_ar - 2, self.join(a, b)
        if isinstance(e, UnExpr):
            _, a = self.expr(e.arg, env)
            if e.op == "~":
                return 2, {(y, x): v for (x, y), v in a.items()}
            cl = self.closure(a)
            if e.op == "*":
                cl = dict(cl)
                for i in range(n):
                    cl[(i, i)] = c.or_(cl.get((i, i), FALSE), u.used(i))
            return 2, _compact(cl)
        if isinstance(e, Call):
            f = self.funcs[e.name]
            return self.expr(f.body, {f.param: self.expr(e.arg, env)})
        raise TypeError(f"not an expression: {e!r}")

    def join(self, a: dict, b: dict) -> dict:
        c = self.c
        by_first: dict[int, list] = {}
        for k, v in b.items():
            by_first.setdefault(k[0], []).append((k[1:], v))
        acc: dict[tuple, list] = {}
        for x, va in a.items():
            for rest, vb in by_first.get(x[-1], ()):
                acc.setdefault(x[:-1] + rest, []).append(c.and_(va, vb))
        return _compact({k: c.or_(v) for k, v in acc.items()})

    def closure(self, r: dict) -> dict:
        c = self.c
        cur = dict(r)
        rounds = max(1, math.ceil(math.log2(max(self.u.n, 2)))) + 1
        for _ in range(rounds):
            sq = self.join(cur, cur)
            nxt = _compact({k: c.or_(cur.get(k, FALSE), sq.get(k, FALSE)) for k in cur.keys() | sq.keys()})
            if nxt == cur:
                break
            cur = nxt
        return cur

    def formula(self, f: Formula, env: Optional[dict] = None) -> int:
        env = env or {}
        fv = free_vars(f)
        key = ("F", f, tuple((v, env[v][0], tuple(sorted(env[v][1].items()))) for v in sorted(fv)))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._formula(f, env)
            self._memo[key] = hit
        return hit

    def _formula(self, f: Formula, env: dict) -> int:
        c = self.c
        if isinstance(f, BoolConst):
            return TRUE if f.value else FALSE
        if isinstance(f, Compare):
            _, a = self.expr(f.left, env)
            _, b = self.expr(f.right, env)
            if f.op == "in":
                return c.and_(c.implies(v, b.get(k, FALSE)) for k, v in a.items())
            eq = c.and_(c.iff(a.get(k, FALSE), b.get(k, FALSE)) for k in a.keys() | b.keys())
            return eq if f.op == "=" else -eq
        if isinstance(f, Card):
            _, a = self.expr(f.expr, env)
            return self.count(list(a.values()), f.op, f.bound)
        if isinstance(f, Not):
            return -self.formula(f.arg, env)
        if isinstance(f, BinFormula):
            x, y = self.formula(f.left, env), self.formula(f.right, env)
            if f.op == "and":
                return c.and_(x, y)
            if f.op == "or":
                return c.or_(x, y)
            if f.op == "implies":
                return c.implies(x, y)
            return c.iff(x, y)
        if isinstance(f, Quant):
            _, dom = self.expr(f.domain, env)
            parts = []
            for k, guard in sorted(dom.items()):
                inner = dict(env)
                inner.update({v: (1, {(i,): TRUE}) for v, i in zip(f.vars, k)})
                body = self.formula(f.body, inner)
                parts.append(c.implies(guard, body) if f.q == "all" else c.and_(guard, body))
            return c.and_(parts) if f.q == "all" else c.or_(parts)
        raise TypeError(f"not a formula: {f!r}")

    def count(self, xs: list[int], op: str, k: int) -> int:
        """Sequential-counter encoding of ``|{x true}| op k``."""
        xs = [x for x in xs if x != FALSE]
        c = self.c
        if k > len(xs):
            ge = {k: FALSE, k + 1: FALSE}
        else:
            out = c.at_least(xs, min(k + 1, len(xs)))
            ge = {j: (out[j] if j < len(out) else FALSE) for j in (k, k + 1)}
        ge_k = TRUE if k == 0 else ge[k]
        ge_k1 = ge[k + 1]
        if op == ">=":
            return ge_k
        if op == ">":
            return ge_k1
        if op == "<=":
            return -ge_k1
        if op == "<":
            return -ge_k
        if op == "=":
            return c.and_(ge_k, -ge_k1)
        if op == "!=":
            return -c.and_(ge_k, -ge_k1)
        raise ValueError(f"unknown comparison {op!r}")

    def objective(self, o: Objective) -> tuple[int, list[int]]:
        """Soft literals (circuit nodes) for ``o``; each violated literal costs one unit."""
        if o.kind == "soft":
            return o.priority, [self.formula(o.target)]
        ar, a = self.expr(o.target)
        cells = itertools.product(range(self.u.n), repeat=ar)
        if o.kind == "maximize":
            return o.priority, [a.get(k, FALSE) for k in cells]
        return o.priority, [-a.get(k, FALSE) for k in cells]


def _compact(d: dict) -> dict:
    return {k: v for k, v in d.items() if v != FALSE}


def ground_expr(e: Expr, u: SymbolicUniverse, binding: Optional[dict] = None,
                prog: Optional[Program] = None) -> SymVal:
    """Ground ``e``; ``binding`` maps free variables to slot indices."""
    env = {k: (1, {(i,): TRUE}) for k, i in (binding or {}).items()}
    ar, d = Grounder(u, prog).expr(e, env)
    return SymVal.make(ar, d)


def ground_formula(f: Formula, u: SymbolicUniverse, binding: Optional[dict] = None,
                   prog: Optional[Program] = None) -> int:
    env = {k: (1, {(i,): TRUE}) for k, i in (binding or {}).items()}
    return Grounder(u, prog).formula(f, env)


def ground_objective(o: Objective, u: SymbolicUniverse, prog: Optional[Program] = None) -> tuple[int, list[int]]:
    return Grounder(u, prog).objective(o)
