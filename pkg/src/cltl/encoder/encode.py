"""CNF encoding of constrained LTL learning over a bounded syntax DAG."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..constraints.ast import Program
from ..constraints.parser import check_program
from ..constraints.prelude import default_size_objective, preset
from ..ltl.formula import BINARY, UNARY
from ..ltl.trace import LassoTrace, Sample
from ..grounder.circuit import FALSE, TRUE
from ..grounder.cnf import CnfSink
from ..grounder.ground import Grounder
from ..grounder.universe import SymbolicUniverse

STRUCTURAL = ("used", "label", "childL", "childR")


@dataclass
class EncodingConfig:
    n: int
    sample: Sample
    program: Program = field(default_factory=Program)
    default_size: bool = True
    tree_mode: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("node bound must be at least 1")
        if self.n < 1 + len(self.program.nodes) and self.program.nodes:
            raise ValueError(f"bound {self.n} is too small for {len(self.program.nodes)} declared node(s)")

    @property
    def ap(self) -> tuple[str, ...]:
        return tuple(self.sample.ap)

    def full_program(self) -> Program:
        """User program plus tree-mode preset and default size objective."""
        prog = self.program
        if not prog.ap:
            prog = Program(prog.funcs, prog.nodes, prog.rels, prog.constraints, prog.objectives, self.ap)
        if self.tree_mode:
            prog = prog.merged(preset("no-dag-reuse", self.ap))
        if self.default_size:
            prog = prog.merged(default_size_objective(self.ap))
        return check_program(prog, self.ap)


class VarMap:
    """Solver variable <-> meaning. Meanings are tuples like ("sem", t, i, k)."""

    def __init__(self, sink: CnfSink):
        self.sink = sink

    def __getitem__(self, meaning: tuple) -> int:
        return self.sink.index[meaning]

    def get(self, meaning: tuple) -> Optional[int]:
        return self.sink.index.get(meaning)

    def meaning(self, var: int) -> tuple:
        return self.sink.meaning[var]

    def __len__(self) -> int:
        return self.sink.nvars

    def items(self):
        return sorted(self.sink.meaning.items())

    def structural(self) -> list[int]:
        return [v for v, m in self.items() if m[0] in STRUCTURAL]


@dataclass
class SoftLayer:
    priority: int
    lits: list[int]
    offset: int = 0  # soft literals that are false by construction

    def cost(self, model: dict[int, bool]) -> int:
        return self.offset + sum(1 for l in self.lits if model.get(abs(l), False) != (l > 0))


@dataclass
class ProblemCnf:
    hard: list[list[int]]
    layers: list[SoftLayer]
    varmap: VarMap
    config: EncodingConfig
    universe: SymbolicUniverse
    program: Program

    @property
    def nvars(self) -> int:
        return self.varmap.sink.nvars

    def structural_vars(self) -> list[int]:
        return self.varmap.structural()


# -- structure -----------------------------------------------------------------

def encode_structure(u: SymbolicUniverse, prog: Optional[Program] = None,
                     grounder: Optional[Grounder] = None) -> list[list[int]]:
    """Well-formedness of the slot DAG (and placement of declared node constants)."""
    n, ap = u.n, u.ap
    cl: list[list[int]] = []
    used = [u.used_var(i) for i in range(n)]
    cl.append([used[0]])
    for i in range(n - 1):
        cl.append([-used[i + 1], used[i]])
    unary, binary = list(UNARY), list(BINARY)
    for i in range(n):
        labs = {k: u.label_var(i, k) for k in u.kinds}
        cl.append([-used[i]] + list(labs.values()))
        ks = list(labs.values())
        for a in range(len(ks)):
            cl.append([-ks[a], used[i]])
            for b in range(a + 1, len(ks)):
                cl.append([-ks[a], -ks[b]])
        lefts = [u.child_var("L", i, j) for j in range(i)]
        rights = [u.child_var("R", i, j) for j in range(i)]
        nonatom = [labs[k] for k in unary + binary]
        for side in (lefts, rights):
            for a in range(len(side)):
                for b in range(a + 1, len(side)):
                    cl.append([-side[a], -side[b]])
        for x in lefts:
            cl.append([-x] + nonatom)
        for x in rights:
            cl.append([-x] + [labs[k] for k in binary])
        for k in unary + binary:
            cl.append([-labs[k]] + lefts)
        for k in binary:
            cl.append([-labs[k]] + rights)
        # every used slot below the root has a parent
        if i < n - 1:
            parents = [u.child_var(s, j, i) for j in range(i + 1, n) for s in ("L", "R")]
            cl.append([-used[i + 1]] + parents)
        # propositions occupy the lowest slots, each at most once, in AP order
        for k, p in enumerate(ap):
            if i == 0:
                continue
            below = [u.label_var(i - 1, q) for q in ap[:k]]
            cl.append([-labs[p]] + below)
    if prog is not None and prog.nodes:
        g = grounder or Grounder(u, prog)
        names = prog.node_names
        for d in prog.nodes:
            cs = [u.const_var(d.name, i) for i in range(n)]
            cl.append(cs)
            for a in range(n):
                cl.append([-cs[a], used[a]])
                for b in range(a + 1, n):
                    cl.append([-cs[a], -cs[b]])
            _, dom = g.expr(d.domain)
            for i in range(n):
                member = dom.get((i,), FALSE)
                cl.append([-cs[i], u.sink.to_cnf(member)])
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                for i in range(n):
                    cl.append([-u.const_var(names[a], i), -u.const_var(names[b], i)])
    return cl


# -- semantics -----------------------------------------------------------------

def sem_var(u: SymbolicUniverse, t: int, i: int, k: int) -> int:
    return u.sink.var(("sem", t, i, k))


def encode_semantics(u: SymbolicUniverse, traces: list[LassoTrace]) -> list[list[int]]:
    """Per-trace, per-slot, per-position LTL semantics guarded by the slot's label."""
    n = u.n
    sink = u.sink
    cl: list[list[int]] = []
    for t, tr in enumerate(traces):
        m = len(tr)
        succ = [tr.succ(k) for k in range(m)]
        fut = [tr.future(k) for k in range(m)]
        sem = [[sem_var(u, t, i, k) for k in range(m)] for i in range(n)]
        for i in range(n):
            used = u.used_var(i)
            for k in range(m):
                cl.append([used, -sem[i][k]])
            for col, p in enumerate(u.ap):
                lab = u.label_var(i, p)
                for k in range(m):
                    cl.append([-lab, sem[i][k] if tr.states[k][col] else -sem[i][k]])
            if i == 0:
                continue
            lv = [sink.var(("lv", t, i, k)) for k in range(m)]
            rv = [sink.var(("rv", t, i, k)) for k in range(m)]
            for j in range(i):
                cL, cR = u.child_var("L", i, j), u.child_var("R", i, j)
                for k in range(m):
                    cl += [[-cL, -lv[k], sem[j][k]], [-cL, lv[k], -sem[j][k]],
                           [-cR, -rv[k], sem[j][k]], [-cR, rv[k], -sem[j][k]]]
            s = sem[i]
            lab = {op: u.label_var(i, op) for op in UNARY + BINARY}
            for k in range(m):
                x = lab["!"]
                cl += [[-x, -s[k], -lv[k]], [-x, s[k], lv[k]]]
                x = lab["&"]
                cl += [[-x, -s[k], lv[k]], [-x, -s[k], rv[k]], [-x, s[k], -lv[k], -rv[k]]]
                x = lab["|"]
                cl += [[-x, -s[k], lv[k], rv[k]], [-x, s[k], -lv[k]], [-x, s[k], -rv[k]]]
                x = lab["->"]
                cl += [[-x, -s[k], -lv[k], rv[k]], [-x, s[k], lv[k]], [-x, s[k], -rv[k]]]
                x = lab["X"]
                cl += [[-x, -s[k], lv[succ[k]]], [-x, s[k], -lv[succ[k]]]]
                # F: eventuality over the future, closed backwards along succ
                x = lab["F"]
                cl.append([-x, -s[k]] + [lv[j] for j in fut[k]])
                cl += [[-x, s[k], -lv[k]], [-x, s[k], -s[succ[k]]]]
                # G: dual of F
                x = lab["G"]
                cl.append([-x, s[k]] + [-lv[j] for j in fut[k]])
                cl += [[-x, -s[k], lv[k]], [-x, -s[k], s[succ[k]]]]
                # U: least fixpoint of r | (l & X self), pinned by the eventuality
                x = lab["U"]
                cl.append([-x, -s[k]] + [rv[j] for j in fut[k]])
                cl += [[-x, -s[k], rv[k], lv[k]], [-x, -s[k], rv[k], s[succ[k]]],
                       [-x, s[k], -rv[k]], [-x, s[k], -lv[k], -s[succ[k]]]]
    return cl


def encode_sample(u: SymbolicUniverse, sample: Sample) -> list[list[int]]:
    """Root slot (top used slot) evaluates to the label at position 0."""
    n = u.n
    cl = []
    for t, (tr, positive) in enumerate(sample.traces):
        for m in range(n):
            guard = [-u.used_var(m)] + ([u.used_var(m + 1)] if m + 1 < n else [])
            s = sem_var(u, t, m, 0)
            cl.append(guard + [s if positive else -s])
    return cl


# -- assembly --------------------------------------------------------------------

def encode_full(cfg: EncodingConfig) -> ProblemCnf:
    prog = cfg.full_program()
    sink = CnfSink()
    u = SymbolicUniverse(cfg.n, cfg.ap, sink, prog.node_names)
    traces = [t for t, _ in cfg.sample.traces]
    g = Grounder(u, prog)
    hard = encode_structure(u, prog, g)
    hard += encode_semantics(u, traces)
    hard += encode_sample(u, cfg.sample)
    for c in prog.constraints:
        sink.assert_(g.formula(c))
    layers = []
    for k, objs in prog.layers():
        lits, offset = [], 0
        for o in objs:
            _, nodes = g.objective(o)
            for b in nodes:
                if b == TRUE:
                    continue
                if b == FALSE:
                    offset += 1
                    continue
                lits.append(sink.to_cnf(b))
        layers.append(SoftLayer(k, lits, offset))
    # sink.clauses holds the true unit, constant placement, constraint and Tseitin clauses
    hard = sink.clauses + hard
    sink.clauses = hard
    return ProblemCnf(hard, layers, VarMap(sink), cfg, u, prog)
