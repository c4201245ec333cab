"""End-to-end runs (learn, enumerate, verify, oracle, WCNF exchange) with self-checking reports."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .constraints import PRESETS, Program, evaluate_program, formula_str, objective_cost, parse_sources
from .constraints.prelude import default_size_objective
from .encoder import EncodingConfig, ProblemCnf, const_placement, decode, encode_full, unsatisfied
from .ltl import (Formula, Sample, SyntaxDag, brute_force_min_consistent, dag_size, evaluate,
                  formula_to_dag, parse_formula, tree_size)
from .maxsat import (DEFAULT_SOLVER, OPTIMUM, SATISFIABLE, UNSAT, LexSolver, SatBackend,
                     SolveTimeout, export_wcnf, layer_costs, parse_external_model)

TIMEOUT = "TIMEOUT"
PASS, FAIL = "PASS", "FAIL"
ORACLE_LIMIT = 8

EXIT_OK, EXIT_UNSAT, EXIT_INPUT, EXIT_TIMEOUT, EXIT_VERIFY = 0, 1, 2, 3, 4


@dataclass
class RunReport:
    command: str
    status: str
    formula: Optional[str] = None
    dag: Optional[SyntaxDag] = None
    bound: Optional[int] = None
    costs: list[tuple[int, int]] = field(default_factory=list)
    sample_ok: Optional[bool] = None
    trace_verdicts: list[tuple[str, bool]] = field(default_factory=list)
    constraint_verdicts: list[tuple[str, bool]] = field(default_factory=list)
    costs_ok: Optional[bool] = None
    witness: dict = field(default_factory=dict)
    elapsed: float = 0.0
    stats: dict = field(default_factory=dict)
    index: int = 0
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status in (OPTIMUM, SATISFIABLE, PASS, FAIL) and self.dag is not None

    @property
    def verified(self) -> bool:
        return (self.sample_ok is not False and all(ok for _, ok in self.constraint_verdicts)
                and self.costs_ok is not False)

    @property
    def exit_code(self) -> int:
        if self.status in (OPTIMUM, SATISFIABLE):
            return EXIT_OK if self.verified else EXIT_VERIFY
        if self.status == PASS:
            return EXIT_OK
        if self.status == TIMEOUT:
            return EXIT_TIMEOUT
        return EXIT_UNSAT

    def dag_lines(self) -> list[str]:
        d = self.dag
        if d is None:
            return []
        out = []
        for i in d.reachable():
            kids = [str(c) for c in d.children(i)]
            out.append(f"{i}:{d.labels[i]}" + (f"({','.join(kids)})" if kids else ""))
        return out

    def machine(self) -> str:
        rows = [("command", self.command), ("status", self.status)]
        if self.index:
            rows.append(("index", self.index))
        if self.formula is not None:
            rows.append(("formula", self.formula))
        if self.dag is not None:
            rows += [("dag", " ".join(self.dag_lines())), ("dag_size", dag_size(self.dag)),
                     ("tree_size", tree_size(self.dag.to_formula()))]
        if self.bound is not None:
            rows.append(("bound", self.bound))
        rows += [(f"cost.{k}", c) for k, c in self.costs]
        for name, v in sorted(self.witness.items()):
            rows.append((f"witness.{name}", v))
        if self.sample_ok is not None:
            rows.append(("check.sample", _pf(self.sample_ok)))
        for i, (t, ok) in enumerate(self.trace_verdicts, start=1):
            rows.append((f"check.trace.{i}", f"{_pf(ok)} {t}"))
        for i, (text, ok) in enumerate(self.constraint_verdicts, start=1):
            rows.append((f"check.constraint.{i}", f"{_pf(ok)} {text}"))
        if self.costs_ok is not None:
            rows.append(("check.costs", _pf(self.costs_ok)))
        if self.found:
            rows.append(("verified", str(self.verified).lower()))
        rows.append(("time", f"{self.elapsed:.3f}"))
        rows += [(f"stat.{k}", v) for k, v in sorted(self.stats.items())]
        if self.note:
            rows.append(("note", self.note))
        return "\n".join(f"{k}: {v}" for k, v in rows) + "\n"

    def human(self) -> str:
        head = f"[{self.index}] " if self.index else ""
        lines = [f"{head}{self.command}: {self.status}" + (f"  {self.formula}" if self.formula else "")]
        if self.dag is not None:
            lines.append(f"  dag      {' '.join(self.dag_lines())}")
            size = f"{dag_size(self.dag)} nodes, tree size {tree_size(self.dag.to_formula())}"
            lines.append(f"  size     {size}" + (f", bound {self.bound}" if self.bound else ""))
        elif self.bound is not None:
            lines.append(f"  bound    {self.bound}")
        if self.costs:
            lines.append("  costs    " + "  ".join(f"k={k}: {c}" for k, c in self.costs))
        if self.witness:
            lines.append("  nodes    " + " ".join(f"{k}={v}" for k, v in sorted(self.witness.items())))
        checks = []
        if self.sample_ok is not None:
            checks.append("sample " + ("ok" if self.sample_ok else "FAILED"))
        if self.constraint_verdicts:
            good = sum(ok for _, ok in self.constraint_verdicts)
            checks.append(f"{good}/{len(self.constraint_verdicts)} constraints hold")
        if self.costs_ok is not None:
            checks.append("costs match" if self.costs_ok else "COSTS DIFFER")
        if checks:
            lines.append("  checks   " + "; ".join(checks))
        for t, ok in self.trace_verdicts:
            if not ok:
                lines.append(f"    trace misclassified: {t}")
        for text, ok in self.constraint_verdicts:
            if not ok:
                lines.append(f"    violated: {text}")
        calls = self.stats.get("solve_calls")
        lines.append(f"  time     {self.elapsed:.2f} s" + (f" ({calls} SAT calls)" if calls else ""))
        if self.note:
            lines.append(f"  note     {self.note}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.machine() if fmt == "machine" else self.human()


def _pf(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- inputs -------------------------------------------------------------------------------

def load_program(texts: Sequence[str], ap: Sequence[str], presets: Sequence[str] = ()) -> Program:
    """Parse constraint sources and presets over ``ap`` as one checked program."""
    for name in presets:
        if name not in PRESETS:
            raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    sources = list(texts) + [PRESETS[name] for name in presets]
    if not sources:
        return Program(ap=tuple(ap))
    return parse_sources(sources, ap)


@dataclass
class LearnOptions:
    max_nodes: int = 6
    default_size: bool = True
    tree_mode: bool = False
    iterative: bool = False
    timeout: Optional[float] = None
    solver: str = DEFAULT_SOLVER
    co_optimal: bool = False


def _deadline(opts: LearnOptions, start: float) -> Optional[float]:
    return None if opts.timeout is None else start + opts.timeout


def _config(n: int, sample: Sample, prog: Program, opts: LearnOptions) -> EncodingConfig:
    return EncodingConfig(n, sample, prog, default_size=opts.default_size, tree_mode=opts.tree_mode)


def check_solution(report: RunReport, d: SyntaxDag, sample: Sample, prog: Program, n: int,
                   witness: Optional[dict] = None, claimed: Optional[list] = None) -> RunReport:
    """Re-derive every claim about ``d`` with the reference evaluators."""
    report.dag = d
    report.formula = str(d)
    report.trace_verdicts = [(str(t), evaluate(d, t, 0) == lab) for t, lab in sample.traces]
    report.sample_ok = all(ok for _, ok in report.trace_verdicts)
    verdict = evaluate_program(prog, d, n=n)
    report.constraint_verdicts = [(formula_str(c), ok) for c, ok in zip(prog.constraints, verdict.constraints)]
    if prog.node_names and verdict.witness is None:
        report.constraint_verdicts.append(("node constants have a witness", False))
    if claimed is not None:
        # the solver's own placement must reproduce its reported costs
        layers: dict[int, int] = {}
        b = witness if witness else (verdict.witness or {})
        for o in prog.objectives:
            layers[o.priority] = layers.get(o.priority, 0) + objective_cost(o, d, prog, b, n)
        mine = [(k, layers[k]) for k in sorted(layers, reverse=True)]
        report.costs_ok = mine == list(claimed)
        report.costs = list(claimed)
    else:
        report.costs = verdict.costs
    report.witness = dict(witness if witness is not None else (verdict.witness or {}))
    return report


def _report_model(command: str, r, p: ProblemCnf, sample: Sample, n: int, start: float) -> RunReport:
    rep = RunReport(command, r.status, bound=n, stats=dict(r.stats), index=r.index)
    d = r.dag if r.dag is not None else decode(r.model, p)
    check_solution(rep, d, sample, p.program, n, const_placement(r.model, p), r.costs)
    rep.elapsed = time.monotonic() - start
    return rep


# -- commands -------------------------------------------------------------------------------

def learn(sample: Sample, prog: Program, opts: LearnOptions) -> RunReport:
    start = time.monotonic()
    deadline = _deadline(opts, start)
    n = opts.max_nodes
    try:
        if opts.iterative:
            lo = 1 + len(prog.nodes) if prog.nodes else 1
            calls = 0
            for m in range(lo, n + 1):
                p = encode_full(_config(m, sample, prog, opts))
                with SatBackend(p.nvars, opts.solver, deadline) as b:
                    b.add_clauses(p.hard)
                    sat = b.solve()
                    calls += b.calls
                if sat:
                    return _solve_at(p, sample, m, opts, deadline, start, note=f"first satisfiable bound {m}",
                                     extra_calls=calls)
            return RunReport("learn", UNSAT, bound=n, elapsed=time.monotonic() - start,
                             stats={"solve_calls": calls}, note=f"no formula with at most {n} nodes")
        p = encode_full(_config(n, sample, prog, opts))
        return _solve_at(p, sample, n, opts, deadline, start)
    except SolveTimeout:
        return RunReport("learn", TIMEOUT, bound=n, elapsed=time.monotonic() - start,
                         note=f"time budget of {opts.timeout} s exhausted")


def _solve_at(p, sample, n, opts, deadline, start, note="", extra_calls=0) -> RunReport:
    ls = LexSolver(p, opts.solver, deadline)
    try:
        r = ls.solve()
    finally:
        ls.close()
    if not r.ok:
        rep = RunReport("learn", UNSAT, bound=n, stats=dict(r.stats), note=note or f"no formula with at most {n} nodes")
        rep.elapsed = time.monotonic() - start
        return rep
    rep = _report_model("learn", r, p, sample, n, start)
    rep.note = note
    if extra_calls:
        rep.stats["solve_calls"] = rep.stats.get("solve_calls", 0) + extra_calls
    return rep


def enumerate_solutions(sample: Sample, prog: Program, opts: LearnOptions, limit: int) -> Iterator[RunReport]:
    """Up to ``limit`` distinct solutions; a final UNSAT or TIMEOUT report ends early streams."""
    if limit <= 0:
        return
    start = time.monotonic()
    n = opts.max_nodes
    p = encode_full(_config(n, sample, prog, opts))
    ls = LexSolver(p, opts.solver, _deadline(opts, start), co_optimal=opts.co_optimal)
    try:
        for _ in range(limit):
            t0 = time.monotonic()
            try:
                r = ls.next()
            except SolveTimeout:
                yield RunReport("enumerate", TIMEOUT, bound=n, elapsed=time.monotonic() - start,
                                note=f"time budget exhausted after {ls.found} solution(s)")
                return
            if not r.ok:
                yield RunReport("enumerate", UNSAT, bound=n, elapsed=time.monotonic() - start,
                                note=f"enumeration exhausted after {ls.found} solution(s)")
                return
            rep = _report_model("enumerate", r, p, sample, n, t0)
            yield rep
    finally:
        ls.close()


def verify_formula(sample: Sample, prog: Program, formula: Formula | str,
                   n: Optional[int] = None, default_size: bool = True) -> RunReport:
    start = time.monotonic()
    f = parse_formula(formula, sample.ap) if isinstance(formula, str) else formula
    d = formula_to_dag(f)
    full = prog.merged(default_size_objective(sample.ap)) if default_size else prog
    bound = max(n or 0, dag_size(d))
    rep = check_solution(RunReport("verify", PASS), d, sample, full, bound)
    rep.formula = str(f)
    rep.bound = bound
    rep.status = PASS if rep.verified else FAIL
    rep.elapsed = time.monotonic() - start
    return rep


def oracle(sample: Sample, prog: Program, max_size: int, force: bool = False) -> RunReport:
    if max_size > ORACLE_LIMIT and not force:
        raise ValueError(f"--max-size {max_size} exceeds {ORACLE_LIMIT}; pass --force to run anyway")
    start = time.monotonic()
    shape = None
    if prog.constraints or prog.nodes:
        shape = lambda g: evaluate_program(prog, formula_to_dag(g)).ok
    f = brute_force_min_consistent(sample, max_size, shape)
    if f is None:
        return RunReport("oracle", UNSAT, bound=max_size, elapsed=time.monotonic() - start,
                         note=f"no consistent formula of tree size <= {max_size}")
    rep = check_solution(RunReport("oracle", OPTIMUM, bound=max_size), formula_to_dag(f), sample, prog,
                         dag_size(formula_to_dag(f)))
    rep.formula = str(f)
    rep.note = f"minimum tree size {tree_size(f)}"
    rep.elapsed = time.monotonic() - start
    return rep


def export(sample: Sample, prog: Program, opts: LearnOptions) -> tuple[ProblemCnf, str, str]:
    """Encode and return (problem, WCNF text, variable-map sidecar text)."""
    p = encode_full(_config(opts.max_nodes, sample, prog, opts))
    w = export_wcnf(p)
    comments = (f"bound {opts.max_nodes}", f"propositions {','.join(sample.ap)}",
                "layers " + " ".join(f"k={l.priority}:{len(l.lits)}+{l.offset}" for l in p.layers))
    sidecar = "".join(f"var {v} {' '.join(map(str, m))}\n" for v, m in p.varmap.items())
    return p, w.dumps(comments), sidecar


def import_model(sample: Sample, prog: Program, opts: LearnOptions, text: str,
                 sidecar: Optional[str] = None) -> RunReport:
    """Decode and verify an external solver's model of the exported instance."""
    start = time.monotonic()
    p = encode_full(_config(opts.max_nodes, sample, prog, opts))
    if sidecar is not None:
        expected = "".join(f"var {v} {' '.join(map(str, m))}\n" for v, m in p.varmap.items())
        if sidecar != expected:
            raise ValueError("variable map does not match these inputs (different bound, flags or files?)")
    m = parse_external_model(text, p.nvars)
    status = OPTIMUM if "OPTIMUM" in text.upper() else SATISFIABLE
    broken = unsatisfied(p.hard, m)
    rep = RunReport("import-model", status, bound=opts.max_nodes)
    if broken:
        rep.note = f"model violates {len(broken)} hard clause(s)"
        rep.sample_ok = False
        rep.elapsed = time.monotonic() - start
        return rep
    d = decode(m, p)
    check_solution(rep, d, sample, p.program, opts.max_nodes, const_placement(m, p), layer_costs(p, m))
    rep.elapsed = time.monotonic() - start
    return rep
