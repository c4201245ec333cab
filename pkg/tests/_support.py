"""Independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
import types

from pysat.solvers import Solver

from cltl.constraints import Program
from cltl.encoder import (EncodingConfig, ProblemCnf, SoftLayer, VarMap, assignment_from_dag, decode,
                          encode_full)
from cltl.encoder.encode import encode_structure
from cltl.grounder import CnfSink, SymbolicUniverse
from cltl.ltl import LassoTrace, Sample, SyntaxDag, evaluate, truth_table
from cltl.ltl.equiv import random_formula, random_lasso
from cltl.maxsat import OPTIMUM, UNSAT, solve_lex


def well_formed_structures(n, ap, consts=()):
    """Every model of the structure clauses, projected on structural variables.

    Yields (assignment dict over structural vars, universe, decoded DAG).
    """
    sink = CnfSink()
    u = SymbolicUniverse(n, ap, sink, consts)
    clauses = sink.clauses + encode_structure(u)
    struct = [v for m, v in sink.index.items() if m[0] in ("used", "label", "childL", "childR")]
    with Solver(name="cadical153", bootstrap_with=clauses) as s:
        while s.solve():
            model = {abs(l): l > 0 for l in s.get_model()}
            a = {v: model.get(v, False) for v in struct}
            a[sink.true_lit] = True
            yield a, u, decode_structure(a, u)
            s.add_clause([-v if a[v] else v for v in struct])


def decode_structure(a, u):
    """Slot DAG described by a structural assignment (slot index = node index)."""
    size = 0
    while size < u.n and a[u.used_var(size)]:
        size += 1
    labels, left, right = [], [], []
    for i in range(size):
        (lab,) = [k for k in u.kinds if a[u.label_var(i, k)]]
        ls = [j for j in range(i) if a[u.child_var("L", i, j)]]
        rs = [j for j in range(i) if a[u.child_var("R", i, j)]]
        labels.append(lab)
        left.append(ls[0] if ls else None)
        right.append(rs[0] if rs else None)
    return SyntaxDag(tuple(labels), tuple(left), tuple(right), size - 1)


def const_placements(names, n):
    for combo in itertools.permutations(range(n), len(names)):
        yield dict(zip(names, combo))


def lex_brute(nvars, hard, layers):
    """Exhaustive lexicographic optimum: list of per-layer violation counts, or None."""
    best = None
    for bits in itertools.product([False, True], repeat=nvars):
        m = {i + 1: b for i, b in enumerate(bits)}
        if not all(any(m[abs(l)] == (l > 0) for l in c) for c in hard):
            continue
        cost = [sum(1 for l in lits if m[abs(l)] != (l > 0)) for lits in layers]
        if best is None or cost < best:
            best = cost
    return best


def random_sample(rng: random.Random, ap, max_traces=4, max_len=6):
    while True:
        k = rng.randint(1, max_traces)
        ts = [random_lasso(rng, ap, max_len) for _ in range(k)]
        cut = rng.randint(0, k)
        try:
            return Sample(ts[:cut], ts[cut:], ap=tuple(ap))
        except ValueError:
            continue


def lasso(ap, text):
    """``"0,1;1,1::1"`` -> LassoTrace."""
    body, _, loop = text.partition("::")
    states = [[int(b) for b in s.split(",")] for s in body.split(";")]
    return LassoTrace.make(ap, states, int(loop) if loop else None)


# -- grounding battery -------------------------------------------------------------

EXAMPLE1 = """
node nG : N[G]; node nImp : N[->]; node nF : N[F];
constraint root = nG and l(root) = nImp and r(nImp) = nF;
constraint no (subNodes(l(nImp)) & N[G, F, U, X]);
constraint no (desc(nF) & N[G, F, U, X]);
"""
SAFETY = "constraint root in N[G] and no (l(root) & N[G, F, U, X]);"
MINING = "constraint root in N[G] and no (subNodes(l(root)) & Temporal);\nmaximize[2] subNodes(root) & (N[p] + N[q]);"
REPAIR = """
node nG : N[G]; node nF : N[F]; node nA : N[&]; node nN : N[!];
rel oldSpec = {(nA, nF), (nA, nG), (nF, p), (nG, nN), (nN, q)};
maximize[2] (L + R) & oldSpec;
"""
REPAIR_SMALL = """
node nF : N[F]; node nN : N[!];
rel oldSpec = {(nF, p), (nN, q)};
constraint p in Nodes;
maximize[2] (L + R) & oldSpec;
"""
# the weakening shape with propositions a, b standing in for XrayMode, SpreaderIn
WEAKEN = """
node nG : N[G]; node nImp : N[->];
constraint root = nG and l(root) = nImp;
constraint all n in desc(nImp) : n in N[&, |, !] + AP;
constraint all n in desc(nImp) : n in N[!] implies l(n) in AP;
constraint all n in subNodes(l(nImp)) & N[|] : no (desc(n) & N[&]);
constraint all n in subNodes(r(nImp)) & N[&] : no (desc(n) & N[|]);
constraint l(nImp) = p or (l(nImp) in N[&] and l(l(nImp)) = p);
constraint r(nImp) = q or (r(nImp) in N[|] and l(r(nImp)) = q);
"""
# exercises every construct of the language at least once
LANGUAGE = """
func kids(x) = x.(L + R);
rel pairs = {(p, q), (q, p)};
constraint all n in Nodes - AP : some kids(n);
constraint some (u, v) in L : u in N[U, &] iff v in AP;
constraint (l(root) >< r(root)) in pairs implies not (root in N[&]);
constraint #{x | x in Nodes and x.L in AP} <= 2;
constraint one N[p] || lone N[q] && #root.*L != 3;
constraint all m, k in Nodes : m in k.^(L + R) implies not (k in m.^(L + R));
constraint #(Nodes.~L) > 0 or root in AP;
constraint lone (L & R) and #(R - L.*R) < 2;
constraint ~L.L in ~(L.~L) iff true;
constraint {} = {} and none = {} and #Temporal >= 0 and #N[X] < 5;
minimize *L - ^R;
maximize N[p];
softempty[3] root.L >< root.R;
soft[2] some N[G];
"""


def battery():
    """(name, source) pairs over propositions (p, q)."""
    from cltl.constraints.prelude import PRESETS
    out = [(f"preset:{k}", v) for k, v in PRESETS.items()]
    out += [("example1", EXAMPLE1), ("safety", SAFETY), ("mining", MINING), ("repair", REPAIR),
            ("repair-small", REPAIR_SMALL), ("weaken", WEAKEN), ("language", LANGUAGE),
            ("default-size", "softempty[1] L;\nsoftempty[1] R;\nsoftempty[1] L + R;")]
    return out


def grounding_mismatches(src, ap, n, limit=None):
    """Compare grounded truth/cost with the concrete evaluator on every structure.

    Checks, for every well-formed structure and every injective placement of
    the node constants onto used slots: each domain membership, each
    constraint, and each objective's violated-literal count.
    """
    from cltl.constraints import parse_constraints
    from cltl.constraints.semantics import Evaluator, objective_cost
    from cltl.grounder import Grounder

    prog = parse_constraints(src, ap)
    names = prog.node_names
    bad = []
    checked = 0
    gen = well_formed_structures(n, ap, names)
    for a, u, d in gen:
        if checked == 0:
            g = Grounder(u, prog)
            circ = u.c
            doms = [g.expr(decl.domain)[1] for decl in prog.nodes]
            cons = [g.formula(c) for c in prog.constraints]
            objs = [g.objective(o)[1] for o in prog.objectives]
        checked += 1
        size = len(d)
        # domains mention no node constant, so check them slot by slot
        ev = Evaluator(d, prog, {})
        allowed = {}
        for decl, dom in zip(prog.nodes, doms):
            concrete = ev.expr(decl.domain)
            allowed[decl.name] = set()
            for i in range(n):
                sym = (i,) in dom and circ.evaluate(dom[(i,)], a)
                if sym != ((i,) in concrete):
                    bad.append(("domain", decl.name, str(d), i))
                if sym and i < size:
                    allowed[decl.name].add(i)
        for place in const_placements(names, size):
            if any(place[k] not in allowed[k] for k in names):
                continue
            full = dict(a)
            for name in names:
                for i in range(n):
                    full[u.const_var(name, i)] = place[name] == i
            memo: dict = {}
            val = lambda x: circ.evaluate(x, full, memo)
            ev = Evaluator(d, prog, place)
            for c, x in zip(prog.constraints, cons):
                if val(x) != ev.formula(c):
                    bad.append(("constraint", c, str(d), place))
            for o, lits in zip(prog.objectives, objs):
                cost = sum(1 for x in lits if not val(x))
                if cost != objective_cost(o, d, prog, place, n):
                    bad.append(("objective", o, str(d), place))
        if limit is not None and checked >= limit:
            gen.close()
            break
    return checked, bad


def formulas_by_dag_size(ap, max_nodes):
    """Every formula whose syntax DAG has at most ``max_nodes`` nodes, built bottom-up."""
    from cltl.ltl.formula import BINARY, UNARY, Formula, atom

    def subs(f):
        return frozenset(f.subformulas())

    level = {atom(p): subs(atom(p)) for p in ap}
    for _ in range(max_nodes - 1):
        new = dict(level)
        small = [(f, s) for f, s in level.items() if len(s) < max_nodes]
        for f, s in small:
            for op in UNARY:
                g = Formula(op, f)
                new.setdefault(g, s | {g})
            for h, t in small:
                if len(s | t) >= max_nodes:
                    continue
                for op in BINARY:
                    g = Formula(op, f, h)
                    new.setdefault(g, s | t | {g})
        level = new
    return [f for f, s in level.items() if len(s) <= max_nodes]


# -- encoder and MaxSAT oracles ---------------------------------------------------------

def check_semantics_equivalence(rng, n_cases, ap=("p", "q", "r"), max_size=7, max_len=8):
    for _ in range(n_cases):
        f = random_formula(rng, ap, rng.randint(1, max_size))
        traces = [random_lasso(rng, ap, max_len) for _ in range(rng.randint(1, 3))]
        # label traces by f itself so the sample clauses are satisfiable
        pos = [t for t in traces if evaluate(f, t)]
        neg = [t for t in traces if not evaluate(f, t)]
        traces = pos + neg
        cfg = EncodingConfig(max_size + 1, Sample(pos, neg, ap=ap), default_size=False)
        p = encode_full(cfg)
        a = assignment_from_dag(f, p)
        u = p.universe
        size = sum(1 for i in range(u.n) if a[u.used_var(i)])
        structural = [v if a[v] else -v for v in p.varmap.structural()]
        sems = [(t, i, k) for t, tr in enumerate(traces) for i in range(u.n) for k in range(len(tr))]
        with Solver(bootstrap_with=p.hard) as s:
            assert s.solve(assumptions=structural)
            m = {abs(l): l > 0 for l in s.get_model()}
            d = decode(m, p)
            for t, tr in enumerate(traces):
                table = truth_table(d, tr)
                for i in range(u.n):
                    for k in range(len(tr)):
                        want = table[i][k] if i < size else False
                        assert m[p.varmap[("sem", t, i, k)]] == want
            # uniqueness: no other sem extension exists
            sel = p.nvars + 1
            s.add_clause([-sel] + [-p.varmap[("sem",) + x] if m[p.varmap[("sem",) + x]]
                                   else p.varmap[("sem",) + x] for x in sems])
            assert not s.solve(assumptions=structural + [sel])


def raw(nvars, hard, layers):
    """A bare clause-level problem: layers are (priority, literals), highest first."""
    vm = VarMap(types.SimpleNamespace(nvars=nvars, meaning={}, index={}))
    return ProblemCnf([list(c) for c in hard], [SoftLayer(k, list(ls)) for k, ls in layers],
                      vm, None, None, Program())


def random_instance(rng, nvars):
    hard = []
    for _ in range(rng.randint(0, 2 * nvars)):
        k = rng.randint(1, 3)
        hard.append([rng.choice([-1, 1]) * rng.randint(1, nvars) for _ in range(k)])
    layers = []
    for k in range(rng.randint(1, 3), 0, -1):
        layers.append((k, [rng.choice([-1, 1]) * rng.randint(1, nvars) for _ in range(rng.randint(1, 5))]))
    return hard, layers


def check_optimality(rng, cases):
    for _ in range(cases):
        nvars = rng.randint(1, 12)
        hard, layers = random_instance(rng, nvars)
        want = lex_brute(nvars, hard, [ls for _, ls in layers])
        r = solve_lex(raw(nvars, hard, layers))
        if want is None:
            assert r.status == UNSAT
        else:
            assert r.status == OPTIMUM
            assert [c for _, c in r.costs] == want
            assert all(any(r.model[abs(l)] == (l > 0) for l in c) for c in hard)


# -- acceptance bookkeeping ---------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str, str, float]] = {}


class criterion:
    """Record one acceptance criterion's verdict; ``detail`` may be set inside the block."""

    def __init__(self, n, title):
        self.n, self.title, self.detail = n, title, ""

    def __enter__(self):
        import time
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        import time
        secs = time.monotonic() - self.start
        detail = self.detail if exc_type is None else f"{self.detail} {exc_type.__name__}: {exc}".strip()
        ACCEPTANCE[self.n] = (exc_type is None, self.title, detail[:300], secs)
        return False
