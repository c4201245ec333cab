"""Print constraint ASTs back to concrete syntax that re-parses to the same AST."""

from __future__ import annotations

from .ast import (BinExpr, BinFormula, BoolConst, Call, Card, Compare, Comprehension, Const, Expr,
                  Formula, Kinds, NodeConst, Not, Objective, Program, Quant, RelRef, TupleLit,
                  UnExpr, Var)

_EXPR_LEVEL = {"+": 1, "-": 1, "&": 2, "><": 3, ".": 4}
_FORM_LEVEL = {"iff": 1, "implies": 2, "or": 3, "and": 4}
_FORM_WORD = {"iff": "iff", "implies": "implies", "or": "or", "and": "and"}


def expr_str(e: Expr, level: int = 0) -> str:
    if isinstance(e, Const):
        return "{}" if e.name == "none" else e.name
    if isinstance(e, Kinds):
        return "N[" + ", ".join(e.kinds) + "]"
    if isinstance(e, (Var, NodeConst, RelRef)):
        return e.name
    if isinstance(e, TupleLit):
        parts = []
        for t in e.tuples:
            if len(t) == 1:
                parts.append(expr_str(t[0], 1))
            else:
                parts.append("(" + ", ".join(expr_str(x, 1) for x in t) + ")")
        return "{" + ", ".join(parts) + "}"
    if isinstance(e, Comprehension):
        head = e.vars[0] if len(e.vars) == 1 else "(" + ", ".join(e.vars) + ")"
        return "{" + head + " | " + formula_str(e.body) + "}"
    if isinstance(e, BinExpr):
        lv = _EXPR_LEVEL[e.op]
        op = " . " if e.op == "." else f" {e.op} "
        if e.op == ".":
            op = "."
        s = expr_str(e.left, lv) + op + expr_str(e.right, lv + 1)
        return f"({s})" if lv < level else s
    if isinstance(e, UnExpr):
        return e.op + expr_str(e.arg, 5)
    if isinstance(e, Call):
        return f"{e.name}({expr_str(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


def formula_str(f: Formula, level: int = 0) -> str:
    if isinstance(f, BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, Compare):
        return f"{expr_str(f.left, 1)} {f.op} {expr_str(f.right, 1)}"
    if isinstance(f, Card):
        if f.bound in (0, 1) and f.op == "=":
            s = ("no " if f.bound == 0 else "one ") + expr_str(f.expr, 1)
            return f"({s})" if level > 5 else s
        return f"#{expr_str(f.expr, 2)} {f.op} {f.bound}"
    if isinstance(f, Not):
        s = "not " + formula_str(f.arg, 5)
        return f"({s})" if level > 5 else s
    if isinstance(f, BinFormula):
        lv = _FORM_LEVEL[f.op]
        if f.op == "implies":
            s = f"{formula_str(f.left, lv + 1)} implies {formula_str(f.right, lv)}"
        else:
            s = f"{formula_str(f.left, lv)} {_FORM_WORD[f.op]} {formula_str(f.right, lv + 1)}"
        return f"({s})" if lv < level else s
    if isinstance(f, Quant):
        head = f.vars[0] if len(f.vars) == 1 else "(" + ", ".join(f.vars) + ")"
        s = f"{f.q} {head} in {expr_str(f.domain)} : {formula_str(f.body)}"
        return f"({s})" if level > 0 else s
    raise TypeError(f"not a formula: {f!r}")


def objective_str(o: Objective) -> str:
    body = formula_str(o.target) if o.kind == "soft" else expr_str(o.target)
    return f"{o.kind}[{o.priority}] {body};"


def unparse(p: Program) -> str:
    lines = []
    for f in p.funcs.values():
        lines.append(f"func {f.name}({f.param}) = {expr_str(f.body)};")
    for d in p.nodes:
        lines.append(f"node {d.name} : {expr_str(d.domain)};")
    for name, e in p.rels.items():
        lines.append(f"rel {name} = {expr_str(e)};")
    for c in p.constraints:
        lines.append(f"constraint {formula_str(c)};")
    for o in p.objectives:
        lines.append(objective_str(o))
    return "\n".join(lines) + ("\n" if lines else "")
