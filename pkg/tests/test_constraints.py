import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cltl.constraints import (BinExpr, Card, ConstraintSyntaxError, ConstraintTypeError,
                              Kinds, Objective, eval_expr, evaluate_program, holds,
                              objective_cost, parse_constraints, parse_formula_text, prelude, preset,
                              unparse)
from cltl.constraints.semantics import closure, join
from cltl.ltl import formula_to_dag, parse_formula

AP = ["a", "b", "p", "q", "x", "cs0", "cs1", "green", "red", "blue"]


def dag(text, share=True):
    return formula_to_dag(parse_formula(text), share)


def node_of(d, label):
    hits = [i for i in d.reachable() if d.labels[i] == label]
    assert len(hits) == 1
    return hits[0]


# -- parsing -------------------------------------------------------------------

def test_parse_safety_shape():
    prog = parse_constraints("constraint root in N[G] and no (subNodes(l(root)) & Temporal);", AP)
    assert len(prog.constraints) == 1 and not prog.objectives


def test_parse_default_objective():
    prog = parse_constraints("softempty[1] L + R;", AP)
    assert prog.objectives == [Objective("softempty", 1, BinExpr("+", _c("L"), _c("R")))]


def _c(name):
    from cltl.constraints import Const
    return Const(name)


def test_parse_maximize_priority():
    prog = parse_constraints("maximize[2] subNodes(root) & (N[p] + N[q]);", AP)
    (o,) = prog.objectives
    assert o.kind == "maximize" and o.priority == 2


def test_priority_defaults_to_one_and_aliases():
    prog = parse_constraints("softno L; maxsome N[p]; minsome R;", AP)
    assert [(o.kind, o.priority) for o in prog.objectives] == [
        ("softempty", 1), ("maximize", 1), ("minimize", 1)]


def test_comments_and_cardinality_hash():
    prog = parse_constraints("# a comment\nconstraint #N[G] >= 1; -- trailing\n// another\n", AP)
    assert prog.constraints == [Card(Kinds(("G",)), ">=", 1)]


def test_proposition_is_singleton_expression():
    prog = parse_constraints("constraint l(root) = p;", AP)
    assert prog.constraints[0] == parse_constraints("constraint l(root) = N[p];", AP).constraints[0]


@pytest.mark.parametrize("text,exc,msg", [
    ("constraint root in ;", ConstraintSyntaxError, "expected expression"),
    ("constraint root in N[G]", ConstraintSyntaxError, "expected ';'"),
    ("constraint zz in Nodes;", ConstraintTypeError, "unknown identifier"),
    ("constraint root in L;", ConstraintTypeError, "arity"),
    ("constraint some n in L : true;", ConstraintTypeError, "domain"),
    ("constraint no ^root;", ConstraintTypeError, "binary relation"),
    ("func f(x) = g(x); func g(x) = f(x); constraint no f(root);", ConstraintTypeError, "recursive"),
    ("func l(x) = x; ", ConstraintTypeError, "builtin"),
    ("constraint no N[W];", ConstraintTypeError, "unknown operator"),
    ("constraint no root.root;", ConstraintTypeError, "join"),
])
def test_errors(text, exc, msg):
    with pytest.raises(exc, match=msg):
        parse_constraints(text, AP)


def test_syntax_error_has_position():
    with pytest.raises(ConstraintSyntaxError, match=r"line 2, column 19"):
        parse_constraints("softempty L;\nconstraint root = ;", AP)


SOURCES = [
    "constraint root in N[G] and no (subNodes(l(root)) & Temporal);\nmaximize[2] subNodes(root) & (N[cs0] + N[cs1]);",
    "func kids(x) = x.(L + R);\nnode g : N[G];\nconstraint all n in kids(g) : some n.~L or n in AP;",
    "rel pairs = {(a, b), (p, q)};\nconstraint (l(root) >< r(root)) in pairs implies not (root in N[&]);",
    "constraint some (u, v) in L : u in N[U] iff v in AP;\nsoft[3] #{x | x in AP} > 2;",
    "constraint {x | x in Nodes} = Nodes - {};\nminimize *L - ^R;\nconstraint one N[p] || lone N[q] && true;",
    "constraint all m, k in Nodes : m = k or m != k;",
]


@pytest.mark.parametrize("src", SOURCES)
def test_unparse_roundtrip(src):
    prog = parse_constraints(src, AP)
    again = parse_constraints(unparse(prog), AP)
    assert again == prog
    assert unparse(again) == unparse(prog)


# -- evaluation ----------------------------------------------------------------

LIVE = dag("G(a -> F b)")


def test_subnodes_of_root_is_everything():
    # G, ->, a, F, b: the DAG has exactly five distinct nodes
    assert eval_expr(parse_formula_text("Nodes = Nodes").left, LIVE) == set(LIVE.reachable())
    e = parse_constraints("minimize subNodes(root);", AP).objectives[0].target
    assert eval_expr(e, LIVE) == set(LIVE.reachable())
    assert len(LIVE.reachable()) == 5


def test_desc_of_leaf_is_empty():
    e = parse_constraints("minimize desc(root);", AP).objectives[0].target
    assert eval_expr(e, dag("p")) == set()


def test_left_and_right_children():
    l_root = parse_constraints("minimize l(root);", AP).objectives[0].target
    imp = node_of(LIVE, "->")
    assert eval_expr(l_root, LIVE) == {imp}
    # a free variable is bound through the binding map
    from cltl.constraints import Call, Var
    assert eval_expr(Call("r", Var("v")), LIVE, {"v": imp}) == {node_of(LIVE, "F")}
    with pytest.raises(ConstraintTypeError, match="unknown identifier"):
        parse_formula_text("r(v) = r(v)")


def test_liveness_example_holds():
    prog = prelude(AP)["liveness-pattern"]
    assert evaluate_program(prog, LIVE).ok
    assert not evaluate_program(prog, dag("F a")).ok
    assert not evaluate_program(prog, dag("G(a -> F G b)")).ok
    assert not evaluate_program(prog, dag("G(X a -> F b)")).ok


def test_no_tautology():
    c = preset("no-tautology", AP).constraints[0]
    assert not holds(c, dag("p -> p"))
    assert holds(c, dag("p"))
    assert holds(c, dag("p | !p"))


def test_nnf():
    c = preset("nnf", AP).constraints[0]
    assert not holds(c, dag("!G x"))
    assert holds(c, dag("F !x"))


def test_no_dag_reuse():
    prog = preset("no-dag-reuse", AP)
    assert not evaluate_program(prog, dag("F G p | F G p")).ok
    assert evaluate_program(prog, dag("F G p | F G p", share=False)).ok
    assert evaluate_program(prog, dag("p -> p")).ok
    assert evaluate_program(prog, dag("F p | G p")).ok
    assert not evaluate_program(prog, dag("F p | G F p")).ok


def test_objective_costs():
    soft_empty = parse_constraints("softempty L + R;", AP).objectives[0]
    assert objective_cost(soft_empty, dag("F G p | F G p")) == 3  # (|,F) twice collapses in the union
    size = parse_constraints("softempty L; softempty R;", AP).objectives
    assert sum(objective_cost(o, dag("F G p | F G p")) for o in size) == 4
    fact = parse_constraints("soft true;", AP).objectives[0]
    assert objective_cost(fact, dag("p")) == 0
    mx = parse_constraints("maximize subNodes(root) & (N[cs0] + N[cs1]);", AP).objectives[0]
    mutex = dag("G !(cs0 & cs1)")
    assert len(eval_expr(mx.target, mutex)) == 2
    assert objective_cost(mx, mutex, n=6) == 4
    assert objective_cost(mx, mutex) == len(mutex.reachable()) - 2


def test_repair_retention_cost():
    src = """
        node nG : N[G]; node nF : N[F]; node nA : N[&]; node nN : N[!];
        rel oldSpec = {(nA, nF), (nA, nG), (nF, green), (nG, nN), (nN, red)};
        maximize[2] (L + R) & oldSpec;
    """
    prog = parse_constraints(src, AP)
    good = evaluate_program(prog, dag("F green & G !red & F blue"), n=8)
    assert good.ok and good.costs == [(2, 64 - 5)]
    worse = evaluate_program(prog, dag("F blue & F green & G !red"), n=8)
    assert worse.ok and worse.costs[0][1] > 64 - 5


def test_weakening_constraints_hold_on_target():
    src = open_suite_constraints("therac-weakening")
    prog = parse_constraints(src, ["XrayMode", "Fired", "SpreaderIn", "BeamOn"])
    assert evaluate_program(prog, formula_to_dag(parse_formula("G(XrayMode & Fired -> SpreaderIn)"))).ok
    assert evaluate_program(prog, formula_to_dag(parse_formula("G(XrayMode -> SpreaderIn | BeamOn)"))).ok
    assert not evaluate_program(prog, formula_to_dag(parse_formula("G(Fired -> SpreaderIn)"))).ok
    assert not evaluate_program(prog, formula_to_dag(parse_formula("G(XrayMode | Fired -> SpreaderIn)"))).ok


def open_suite_constraints(name):
    from importlib import resources
    return resources.files("cltl").joinpath("suites", name, "constraints.txt").read_text()


def test_program_witness_requires_distinct_nodes():
    prog = parse_constraints("node u : N[F]; node v : N[F];", AP)
    assert not evaluate_program(prog, dag("F p")).ok
    assert evaluate_program(prog, dag("F p | F q")).ok


# -- relational algebra properties ---------------------------------------------

rel_st = st.frozensets(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=10)
set_st = st.frozensets(st.tuples(st.integers(0, 4)), max_size=5)


@given(set_st, rel_st, rel_st)
def test_join_associative(s, r1, r2):
    assert join(join(s, r1), r2) == join(s, join(r1, r2))


@given(rel_st)
def test_closure_by_squaring(r):
    c = closure(r)
    # ceil(log2 5) + 1 squarings of (r + r.r) reach the same fixpoint
    sq = set(r)
    for _ in range(4):
        sq = sq | join(frozenset(sq), frozenset(sq))
    assert c == frozenset(sq)
    assert r <= c and join(c, c) <= c


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_inverse_involution_and_reflexive(seed):
    from cltl.ltl.equiv import random_formula
    f = random_formula(random.Random(seed), ["p", "q"], 6)
    d = formula_to_dag(f)
    prog = parse_constraints("constraint ~~(L + R) = L + R; constraint all n in Nodes : n in n.*L;", ["p", "q"])
    assert evaluate_program(prog, d).ok
