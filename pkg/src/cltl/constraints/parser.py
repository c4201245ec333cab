"""Concrete syntax for constraint programs.

Statements end with ``;`` and may appear in any order::

    func f(x) = x.L;
    node nG : N[G];
    rel old = {(nG, p)};
    constraint root = nG and no (desc(nG) & Temporal);
    maximize[2] subNodes(root) & (N[p] + N[q]);
    softempty L + R;
    soft[1] one N[U];

Comments start with ``--``, ``//``, or a ``#`` followed by whitespace; a ``#``
glued to an expression is cardinality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..ltl.formula import OPERATORS
from .ast import (CONSTANTS, BinExpr, BinFormula, BoolConst, Call, Card, Compare, Comprehension,
                  Const, Expr, Formula, FuncDef, Kinds, NodeConst, NodeDecl, Not, Objective,
                  Program, Quant, RelRef, TupleLit, UnExpr, Var)


class ConstraintError(ValueError):
    def __init__(self, msg: str, pos: Optional[int] = None, text: Optional[str] = None):
        if pos is not None and text is not None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            msg = f"{msg} (line {line}, column {col})"
        super().__init__(msg)
        self.pos = pos


class ConstraintSyntaxError(ConstraintError):
    pass


class ConstraintTypeError(ConstraintError):
    pass


KIND_NAMES = {
    "G": "G", "F": "F", "X": "X", "U": "U",
    "!": "!", "Neg": "!", "Not": "!",
    "&": "&", "And": "&", "|": "|", "Or": "|",
    "->": "->", "Imply": "->", "Implies": "->",
}

KEYWORDS = {"func", "node", "rel", "constraint", "minimize", "maximize", "softempty", "soft",
            "minsome", "maxsome", "softno", "all", "some", "no", "one", "lone", "not", "and",
            "or", "implies", "iff", "in", "true", "false", "N"}

OBJECTIVE_ALIASES = {"minimize": "minimize", "minsome": "minimize",
                     "maximize": "maximize", "maxsome": "maximize",
                     "softempty": "softempty", "softno": "softempty", "soft": "soft"}

CMP_OPS = ("=", "!=", "<=", ">=", "<", ">")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>(?:--|//)[^\n]*|\#(?=\s|$)[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym><=>|=>|->|><|<=|>=|!=|&&|\|\||[-+&\\.^*~#(){}\[\],:;|=<>!])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, num, sym, eof
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "ident") and t.text in texts

    def accept(self, *texts: str) -> Optional[Token]:
        if self.at(*texts):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            self.error(f"expected {text!r}")
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error("expected identifier")
        self.i += 1
        return t.text

    def error(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ConstraintSyntaxError(f"{msg}, found {found}", t.pos, self.text)

    # -- statements
    def program(self) -> Program:
        prog = Program()
        while self.tok.kind != "eof":
            self.statement(prog)
        return prog

    def statement(self, prog: Program):
        start = self.tok
        if self.accept("func"):
            name = self.ident()
            self.expect("(")
            param = self.ident()
            self.expect(")")
            self.expect("=")
            body = self.expr()
            if name in prog.funcs:
                raise ConstraintTypeError(f"function {name!r} defined twice", start.pos, self.text)
            prog.funcs[name] = FuncDef(name, param, body)
        elif self.accept("node"):
            names = [self.ident()]
            while self.accept(","):
                names.append(self.ident())
            self.expect(":")
            dom = self.expr()
            for n in names:
                if n in prog.node_names:
                    raise ConstraintTypeError(f"node {n!r} declared twice", start.pos, self.text)
                prog.nodes.append(NodeDecl(n, dom))
        elif self.accept("rel"):
            name = self.ident()
            self.expect("=")
            if name in prog.rels:
                raise ConstraintTypeError(f"relation {name!r} defined twice", start.pos, self.text)
            prog.rels[name] = self.expr()
        elif self.accept("constraint"):
            prog.constraints.append(self.formula())
        elif self.tok.kind == "ident" and self.tok.text in OBJECTIVE_ALIASES:
            kind = OBJECTIVE_ALIASES[self.tok.text]
            self.i += 1
            k = 1
            if self.accept("["):
                t = self.tok
                if t.kind != "num" or int(t.text) < 1:
                    self.error("expected positive priority")
                self.i += 1
                k = int(t.text)
                self.expect("]")
            target = self.formula() if kind == "soft" else self.expr()
            prog.objectives.append(Objective(kind, k, target))
        else:
            self.error("expected a statement (func, node, rel, constraint, or an objective)")
        self.expect(";")

    # -- formulas
    def formula(self) -> Formula:
        left = self.implication()
        while self.accept("<=>", "iff"):
            left = BinFormula("iff", left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("=>", "implies"):
            return BinFormula("implies", left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept("||", "or"):
            left = BinFormula("or", left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary_formula()
        while self.accept("&&", "and"):
            left = BinFormula("and", left, self.unary_formula())
        return left

    def unary_formula(self) -> Formula:
        if self.accept("!", "not"):
            return Not(self.unary_formula())
        if self.at("all", "some") and self._quant_ahead():
            q = self.tok.text
            self.i += 1
            return self.quant_rest(q)
        for word, op, k in (("no", "=", 0), ("one", "=", 1), ("lone", "<=", 1), ("some", ">=", 1)):
            if self.accept(word):
                return Card(self.expr(), op, k)
        return self.atomic()

    def _quant_ahead(self) -> bool:
        j = self.i + 1
        t = self.toks[j]
        if t.kind == "ident" and t.text not in KEYWORDS:
            nxt = self.toks[j + 1]
            return nxt.text in ("in", ",") and nxt.kind in ("ident", "sym")
        if t.text == "(":
            j += 1
            while self.toks[j].kind == "ident" and self.toks[j + 1].text == ",":
                j += 2
            return (self.toks[j].kind == "ident" and self.toks[j + 1].text == ")"
                    and self.toks[j + 2].text == "in")
        return False

    def quant_rest(self, q: str) -> Formula:
        groups: list[tuple[str, ...]] = []
        while True:
            if self.accept("("):
                names = [self.ident()]
                while self.accept(","):
                    names.append(self.ident())
                self.expect(")")
                groups.append(tuple(names))
            else:
                groups.append((self.ident(),))
            if not self.accept(","):
                break
        self.expect("in")
        dom = self.expr()
        self.expect(":")
        body = self.formula()
        for g in reversed(groups):
            body = Quant(q, g, dom, body)
        return body

    def atomic(self) -> Formula:
        if self.accept("true"):
            return BoolConst(True)
        if self.accept("false"):
            return BoolConst(False)
        if self.accept("#"):
            e = self.inter_expr()
            op = self.accept(*CMP_OPS)
            if op is None:
                self.error("expected comparison after cardinality")
            t = self.tok
            if t.kind != "num":
                self.error("expected number")
            self.i += 1
            return Card(e, op.text, int(t.text))
        if self.at("("):
            save = self.i
            try:
                return self.comparison()
            except ConstraintSyntaxError:
                self.i = save
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        return self.comparison()

    def comparison(self) -> Formula:
        left = self.expr()
        if self.accept("in"):
            return Compare("in", left, self.expr())
        op = self.accept("=", "!=")
        if op is None:
            self.error("expected 'in', '=' or '!='")
        return Compare(op.text, left, self.expr())

    # -- expressions
    def expr(self) -> Expr:
        left = self.inter_expr()
        while True:
            op = self.accept("+", "-", "\\")
            if op is None:
                return left
            left = BinExpr("+" if op.text == "+" else "-", left, self.inter_expr())

    def inter_expr(self) -> Expr:
        left = self.product_expr()
        while self.accept("&"):
            left = BinExpr("&", left, self.product_expr())
        return left

    def product_expr(self) -> Expr:
        left = self.join_expr()
        while self.accept("><"):
            left = BinExpr("><", left, self.join_expr())
        return left

    def join_expr(self) -> Expr:
        left = self.prefix_expr()
        while self.accept("."):
            left = BinExpr(".", left, self.prefix_expr())
        return left

    def prefix_expr(self) -> Expr:
        op = self.accept("~", "^", "*")
        if op is not None:
            return UnExpr(op.text, self.prefix_expr())
        return self.primary()

    def primary(self) -> Expr:
        t = self.tok
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("{"):
            return self.braces()
        if t.kind == "ident" and t.text == "N" and self.peek().text == "[":
            self.i += 2
            kinds = [self.kind_name()]
            while self.accept(","):
                kinds.append(self.kind_name())
            self.expect("]")
            return Kinds(tuple(kinds))
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            if self.accept("("):
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            return Var(t.text)
        self.error("expected expression")

    def kind_name(self) -> str:
        t = self.tok
        if t.text in KIND_NAMES:
            self.i += 1
            return KIND_NAMES[t.text]
        if t.kind == "ident":
            self.i += 1
            return t.text
        self.error("expected operator or proposition name")

    def braces(self) -> Expr:
        if self.accept("}"):
            return Const("none")
        # comprehension: {x | φ} or {(a, b) | φ}
        j = self.i
        names: list[str] = []
        if self.toks[j].kind == "ident" and self.toks[j + 1].text == "|":
            names = [self.toks[j].text]
            j += 2
        elif self.toks[j].text == "(":
            k = j + 1
            cand = []
            while self.toks[k].kind == "ident":
                cand.append(self.toks[k].text)
                if self.toks[k + 1].text == ",":
                    k += 2
                    continue
                if self.toks[k + 1].text == ")" and self.toks[k + 2].text == "|":
                    names = cand
                    j = k + 3
                break
        if names:
            if any(n in KEYWORDS for n in names):
                self.error("expected identifier")
            self.i = j
            body = self.formula()
            self.expect("}")
            return Comprehension(tuple(names), body)
        tuples = [self.tuple_elem()]
        while self.accept(","):
            tuples.append(self.tuple_elem())
        self.expect("}")
        return TupleLit(tuple(tuples))

    def tuple_elem(self) -> tuple[Expr, ...]:
        if self.at("("):
            save = self.i
            self.i += 1
            first = self.expr()
            if self.accept(","):
                items = [first, self.expr()]
                while self.accept(","):
                    items.append(self.expr())
                self.expect(")")
                return tuple(items)
            self.i = save
        return (self.expr(),)


# -- resolution and typechecking ------------------------------------------------

BUILTIN_SOURCE = """
func l(x) = x.L;
func r(x) = x.R;
func desc(x) = x.^(L + R);
func subNodes(x) = x.*(L + R);
"""


BUILTIN_FUNCS: dict[str, FuncDef] = {}


class Checker:
    """Resolves identifiers and infers arities (1 = node set, 2 = node relation)."""

    def __init__(self, prog: Program, ap: Sequence[str], text: str = ""):
        self.prog = prog
        self.ap = tuple(ap)
        self.text = text
        self.funcs = dict(BUILTIN_FUNCS)
        for name, f in prog.funcs.items():
            if name in BUILTIN_FUNCS:
                raise ConstraintTypeError(f"cannot redefine builtin function {name!r}")
            self.funcs[name] = f
        self.nodes = {d.name for d in prog.nodes}
        self._func_arity: dict[tuple[str, int], int] = {}
        self._func_stack: list[str] = []
        self._rel_arity: dict[str, int] = {}
        self._rel_stack: list[str] = []

    def fail(self, msg: str):
        raise ConstraintTypeError(msg)

    def check_program(self) -> Program:
        p = self.prog
        for name in list(p.funcs) + list(p.rels) + p.node_names:
            if name in CONSTANTS or name in self.ap:
                self.fail(f"{name!r} shadows a builtin constant or proposition")
        clash = (set(p.funcs) & set(p.rels)) | (set(p.funcs) & self.nodes) | (set(p.rels) & self.nodes)
        if clash:
            self.fail(f"name used for more than one definition: {sorted(clash)}")
        self._check_recursion()
        out = Program(ap=self.ap)
        for name, f in p.funcs.items():
            out.funcs[name] = FuncDef(name, f.param, self.resolve(f.body, {f.param}))
        self.funcs.update(out.funcs)
        for name, e in p.rels.items():
            out.rels[name] = self.resolve(e, set())
        for d in p.nodes:
            out.nodes.append(NodeDecl(d.name, self.resolve(d.domain, set())))
        out.constraints = [self.resolve_formula(c, set()) for c in p.constraints]
        for o in p.objectives:
            tgt = self.resolve_formula(o.target, set()) if o.kind == "soft" else self.resolve(o.target, set())
            out.objectives.append(Objective(o.kind, o.priority, tgt))
        # arity checks on the resolved program
        self.prog = out
        for name in out.rels:
            self.rel_arity(name)
        for d in out.nodes:
            if self.arity(d.domain, {}) != 1:
                self.fail(f"domain of node {d.name!r} must be a node set")
        for c in out.constraints:
            self.check_formula(c, {})
        for o in out.objectives:
            if o.kind == "soft":
                self.check_formula(o.target, {})
            else:
                self.arity(o.target, {})
        return out

    def _check_recursion(self):
        graph = {name: _calls(f.body) for name, f in self.prog.funcs.items()}
        state: dict[str, int] = {}

        def visit(n, path):
            if state.get(n) == 1:
                cyc = path[path.index(n):] + [n]
                self.fail("recursive function definition: " + " -> ".join(cyc))
            if state.get(n) == 2 or n not in graph:
                return
            state[n] = 1
            for m in sorted(graph[n]):
                visit(m, path + [n])
            state[n] = 2

        for n in graph:
            visit(n, [])

    # identifier resolution
    def resolve(self, e: Expr, bound: set[str]) -> Expr:
        if isinstance(e, Var):
            n = e.name
            if n in bound:
                return e
            if n in self.nodes:
                return NodeConst(n)
            if n in self.prog.rels:
                return RelRef(n)
            if n in CONSTANTS:
                return Const(n)
            if n in self.ap:
                return Kinds((n,))
            self.fail(f"unknown identifier {n!r}")
        if isinstance(e, Kinds):
            for k in e.kinds:
                if k not in OPERATORS and k not in self.ap:
                    self.fail(f"unknown operator or proposition {k!r} in N[...]")
            return e
        if isinstance(e, (Const, NodeConst, RelRef)):
            return e
        if isinstance(e, TupleLit):
            return TupleLit(tuple(tuple(self.resolve(x, bound) for x in t) for t in e.tuples))
        if isinstance(e, Comprehension):
            return Comprehension(e.vars, self.resolve_formula(e.body, bound | set(e.vars)))
        if isinstance(e, BinExpr):
            return BinExpr(e.op, self.resolve(e.left, bound), self.resolve(e.right, bound))
        if isinstance(e, UnExpr):
            return UnExpr(e.op, self.resolve(e.arg, bound))
        if isinstance(e, Call):
            if e.name not in self.funcs:
                self.fail(f"unknown function {e.name!r}")
            return Call(e.name, self.resolve(e.arg, bound))
        raise TypeError(f"not an expression: {e!r}")

    def resolve_formula(self, f: Formula, bound: set[str]) -> Formula:
        if isinstance(f, BoolConst):
            return f
        if isinstance(f, Compare):
            return Compare(f.op, self.resolve(f.left, bound), self.resolve(f.right, bound))
        if isinstance(f, Card):
            return Card(self.resolve(f.expr, bound), f.op, f.bound)
        if isinstance(f, Not):
            return Not(self.resolve_formula(f.arg, bound))
        if isinstance(f, BinFormula):
            return BinFormula(f.op, self.resolve_formula(f.left, bound), self.resolve_formula(f.right, bound))
        if isinstance(f, Quant):
            if len(set(f.vars)) != len(f.vars):
                self.fail("repeated variable in quantifier")
            dom = self.resolve(f.domain, bound)
            return Quant(f.q, f.vars, dom, self.resolve_formula(f.body, bound | set(f.vars)))
        raise TypeError(f"not a formula: {f!r}")

    # arities
    def rel_arity(self, name: str) -> int:
        if name in self._rel_arity:
            return self._rel_arity[name]
        if name in self._rel_stack:
            self.fail(f"relation {name!r} is defined in terms of itself")
        self._rel_stack.append(name)
        a = self.arity(self.prog.rels[name], {})
        self._rel_stack.pop()
        self._rel_arity[name] = a
        return a

    def func_arity(self, name: str, arg_arity: int) -> int:
        key = (name, arg_arity)
        if key not in self._func_arity:
            f = self.funcs[name]
            self._func_arity[key] = self.arity(f.body, {f.param: arg_arity})
        return self._func_arity[key]

    def arity(self, e: Expr, env: dict[str, int]) -> int:
        if isinstance(e, Const):
            return 2 if e.name in ("L", "R") else 1
        if isinstance(e, (Kinds, NodeConst)):
            return 1
        if isinstance(e, Var):
            if e.name not in env:
                self.fail(f"unbound variable {e.name!r}")
            return env[e.name]
        if isinstance(e, RelRef):
            return self.rel_arity(e.name)
        if isinstance(e, TupleLit):
            widths = {len(t) for t in e.tuples}
            if len(widths) != 1:
                self.fail("tuples in a literal must have equal length")
            w = widths.pop()
            if w > 2:
                self.fail("tuples of more than two nodes are not supported")
            for t in e.tuples:
                for x in t:
                    if self.arity(x, env) != 1:
                        self.fail("tuple components must be node sets")
            return w
        if isinstance(e, Comprehension):
            if len(e.vars) > 2:
                self.fail("comprehensions bind at most two variables")
            inner = dict(env)
            inner.update({v: 1 for v in e.vars})
            self.check_formula(e.body, inner)
            return len(e.vars)
        if isinstance(e, BinExpr):
            a, b = self.arity(e.left, env), self.arity(e.right, env)
            if e.op in ("+", "&", "-"):
                if a != b:
                    self.fail(f"operands of {e.op!r} have different arities ({a} and {b})")
                return a
            if e.op == "><":
                if a + b != 2:
                    self.fail("product is only defined for two node sets")
                return 2
            r = a + b - 2
            if r < 1:
                self.fail("join of two node sets is not a set or relation")
            return r
        if isinstance(e, UnExpr):
            if self.arity(e.arg, env) != 2:
                self.fail(f"{e.op!r} needs a binary relation")
            return 2
        if isinstance(e, Call):
            a = self.arity(e.arg, env)
            return self.func_arity(e.name, a)
        raise TypeError(f"not an expression: {e!r}")

    def check_formula(self, f: Formula, env: dict[str, int]):
        if isinstance(f, BoolConst):
            return
        if isinstance(f, Compare):
            a, b = self.arity(f.left, env), self.arity(f.right, env)
            if a != b:
                self.fail(f"cannot compare arity {a} with arity {b} using {f.op!r}")
        elif isinstance(f, Card):
            if f.bound < 0:
                self.fail("cardinality bound must be nonnegative")
            self.arity(f.expr, env)
        elif isinstance(f, Not):
            self.check_formula(f.arg, env)
        elif isinstance(f, BinFormula):
            self.check_formula(f.left, env)
            self.check_formula(f.right, env)
        elif isinstance(f, Quant):
            if self.arity(f.domain, env) != len(f.vars):
                self.fail(f"quantifier binds {len(f.vars)} variable(s) over a domain of different arity")
            inner = dict(env)
            inner.update({v: 1 for v in f.vars})
            self.check_formula(f.body, inner)
        else:
            raise TypeError(f"not a formula: {f!r}")


def _builtin_funcs() -> dict[str, FuncDef]:
    c = Checker(Program(), ())
    return {name: FuncDef(name, f.param, c.resolve(f.body, {f.param}))
            for name, f in Parser(BUILTIN_SOURCE).program().funcs.items()}


BUILTIN_FUNCS.update(_builtin_funcs())


def _calls(e) -> set[str]:
    out: set[str] = set()

    def walk(x):
        if isinstance(x, Call):
            out.add(x.name)
            walk(x.arg)
        elif isinstance(x, BinExpr):
            walk(x.left), walk(x.right)
        elif isinstance(x, UnExpr):
            walk(x.arg)
        elif isinstance(x, TupleLit):
            for t in x.tuples:
                for y in t:
                    walk(y)
        elif isinstance(x, Comprehension):
            walk(x.body)
        elif isinstance(x, Compare):
            walk(x.left), walk(x.right)
        elif isinstance(x, Card):
            walk(x.expr)
        elif isinstance(x, Not):
            walk(x.arg)
        elif isinstance(x, BinFormula):
            walk(x.left), walk(x.right)
        elif isinstance(x, Quant):
            walk(x.domain), walk(x.body)

    walk(e)
    return out


def parse_constraints(text: str, ap: Iterable[str] = ()) -> Program:
    """Parse and typecheck a constraint program over propositions ``ap``."""
    raw = Parser(text).program()
    return Checker(raw, tuple(ap), text).check_program()


def parse_sources(texts: Sequence[str], ap: Iterable[str] = ()) -> Program:
    """Parse several sources as one program, so each may use the others' declarations.

    Type errors carry line numbers only when there is a single source.
    """
    raw = Program()
    for text in texts:
        raw = raw.merged(Parser(text).program())
    return Checker(raw, tuple(ap), texts[0] if len(texts) == 1 else "").check_program()


def parse_formula_text(text: str, prog: Optional[Program] = None, ap: Iterable[str] = ()) -> Formula:
    """Parse a single constraint formula, resolving names against ``prog``."""
    p = Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    base = prog or Program(ap=tuple(ap))
    base = Program(dict(base.funcs), list(base.nodes), dict(base.rels), [f], [], base.ap or tuple(ap))
    return Checker(base, base.ap).check_program().constraints[0]


def check_program(prog: Program, ap: Optional[Sequence[str]] = None) -> Program:
    """Re-resolve and typecheck an already-built (or merged) program."""
    return Checker(_unresolve(prog), tuple(ap if ap is not None else prog.ap)).check_program()


def _unresolve(prog: Program) -> Program:
    """Turn resolved identifier nodes back into raw names so a merged program re-checks."""
    def ex(e):
        if isinstance(e, NodeConst) or isinstance(e, RelRef):
            return Var(e.name)
        if isinstance(e, Const) and e.name != "none":
            return Var(e.name)
        if isinstance(e, TupleLit):
            return TupleLit(tuple(tuple(ex(x) for x in t) for t in e.tuples))
        if isinstance(e, Comprehension):
            return Comprehension(e.vars, fo(e.body))
        if isinstance(e, BinExpr):
            return BinExpr(e.op, ex(e.left), ex(e.right))
        if isinstance(e, UnExpr):
            return UnExpr(e.op, ex(e.arg))
        if isinstance(e, Call):
            return Call(e.name, ex(e.arg))
        return e

    def fo(f):
        if isinstance(f, Compare):
            return Compare(f.op, ex(f.left), ex(f.right))
        if isinstance(f, Card):
            return Card(ex(f.expr), f.op, f.bound)
        if isinstance(f, Not):
            return Not(fo(f.arg))
        if isinstance(f, BinFormula):
            return BinFormula(f.op, fo(f.left), fo(f.right))
        if isinstance(f, Quant):
            return Quant(f.q, f.vars, ex(f.domain), fo(f.body))
        return f

    return Program({n: FuncDef(n, d.param, ex(d.body)) for n, d in prog.funcs.items()},
                   [NodeDecl(d.name, ex(d.domain)) for d in prog.nodes],
                   {n: ex(e) for n, e in prog.rels.items()},
                   [fo(c) for c in prog.constraints],
                   [Objective(o.kind, o.priority, fo(o.target) if o.kind == "soft" else ex(o.target))
                    for o in prog.objectives], prog.ap)
