"""Lexicographic MaxSAT by linear SAT-UNSAT search, plus solution enumeration."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from ..encoder.decode import decode
from ..encoder.encode import ProblemCnf, SoftLayer
from ..ltl.dag import SyntaxDag, canonical_key, slot_orders
from .backend import DEFAULT_SOLVER, SatBackend, SolveTimeout

OPTIMUM = "OPTIMUM"
SATISFIABLE = "SATISFIABLE"
UNSAT = "UNSAT"


@dataclass
class SolveResult:
    status: str
    model: Optional[dict[int, bool]] = None
    costs: list[tuple[int, int]] = field(default_factory=list)  # (priority, cost), highest first
    stats: dict = field(default_factory=dict)
    dag: Optional[SyntaxDag] = None
    index: int = 0

    @property
    def ok(self) -> bool:
        return self.status in (OPTIMUM, SATISFIABLE)


class Counter:
    """Sequential counter over a layer's violation literals, grown on demand.

    ``out[j]`` is forced true whenever at least ``j`` inputs are true, so
    assuming ``-out[j]`` bounds the count by ``j - 1``.
    """

    def __init__(self, backend: SatBackend, inputs: list[int]):
        self.b = backend
        self.inputs = inputs
        self.cap = 0
        self.out: list[int] = []

    def at_most(self, bound: int) -> list[int]:
        """Assumptions that allow at most ``bound`` true inputs."""
        if bound >= len(self.inputs):
            return []
        self._grow(bound + 1)
        return [-self.out[bound + 1]]

    def _grow(self, cap: int):
        if cap <= self.cap:
            return
        b = self.b
        # rebuild with the larger cap; the old counter stays sound and unused
        prev = None
        for x in self.inputs:
            cur = [None] + [b.new_var() for _ in range(cap)]
            b.add_clause([-x, cur[1]])
            for j in range(1, cap + 1):
                if prev is not None:
                    b.add_clause([-prev[j], cur[j]])
                    if j > 1:
                        b.add_clause([-x, -prev[j - 1], cur[j]])
            prev = cur
        self.out = prev
        self.cap = cap


class LexSolver:
    """Owns one backend loaded with a problem; solves and enumerates."""

    def __init__(self, p: ProblemCnf, solver: str = DEFAULT_SOLVER,
                 deadline: Optional[float] = None, co_optimal: bool = False):
        self.p = p
        self.backend = SatBackend(p.nvars, solver, deadline)
        self.backend.add_clauses(p.hard)
        self.counters = [Counter(self.backend, [-l for l in layer.lits]) for layer in p.layers]
        self.co_optimal = co_optimal
        self.fixed: list[int] = []
        self.found = 0
        self.seen: set = set()
        self.start = time.monotonic()

    def _violations(self, layer: SoftLayer, model: dict[int, bool]) -> int:
        return layer.cost(model) - layer.offset

    def solve(self) -> SolveResult:
        b = self.backend
        base = list(self.fixed) if self.co_optimal else []
        if not self.p.layers:
            if not b.solve(base):
                return self._result(UNSAT)
            return self._result(SATISFIABLE, b.model(), [])
        assumptions = list(base)
        model = None
        costs = []
        for layer, counter in zip(self.p.layers, self.counters):
            if not b.solve(assumptions):
                return self._result(UNSAT)
            model = b.model()
            cost = self._violations(layer, model)
            while cost > 0:
                if not b.solve(assumptions + counter.at_most(cost - 1)):
                    break
                model = b.model()
                cost = self._violations(layer, model)
            assumptions += counter.at_most(cost)
            costs.append((layer.priority, cost + layer.offset))
        # the last model found satisfies every bound fixed so far
        self.fixed = assumptions
        return self._result(OPTIMUM, model, costs)

    def _result(self, status, model=None, costs=()):
        stats = self.backend.stats()
        stats["wall_time"] = round(time.monotonic() - self.start, 4)
        return SolveResult(status, model, list(costs), stats)

    # -- enumeration
    def block(self, d: SyntaxDag, limit: int = 5000):
        """Forbid every slot placement of ``d``."""
        vm = self.p.varmap
        n = self.p.universe.n
        for order in slot_orders(d, list(self.p.universe.ap), limit=limit):
            slot = {node: s for s, node in enumerate(order)}
            m = len(order)
            lits = []
            for s, node in enumerate(order):
                lits.append(-vm[("used", s)])
                lits.append(-vm[("label", s, d.labels[node])])
                if d.left[node] is not None:
                    lits.append(-vm[("childL", s, slot[d.left[node]])])
                if d.right[node] is not None:
                    lits.append(-vm[("childR", s, slot[d.right[node]])])
            if m < n:
                lits.append(vm[("used", m)])
            self.backend.add_clause(lits)

    def block_model(self, model: dict[int, bool]):
        """Blocking clause over the model's true structural literals (plus the next used slot)."""
        vm = self.p.varmap
        n = self.p.universe.n
        size = sum(1 for i in range(n) if model.get(vm[("used", i)], False))
        lits = [-v for v in vm.structural() if model.get(v, False)]
        if size < n:
            lits.append(vm[("used", size)])
        self.backend.add_clause(lits)

    def next(self) -> SolveResult:
        """Next solution with a DAG not returned before (decoded and attached)."""
        while True:
            r = self.solve()
            if not r.ok:
                return r
            d = decode(r.model, self.p)
            key = canonical_key(d)
            self.block_model(r.model)
            if key in self.seen:
                continue
            self.seen.add(key)
            self.block(d)
            self.found += 1
            r.dag = d
            r.index = self.found
            return r

    def close(self):
        self.backend.close()


def solve_lex(p: ProblemCnf, backend: Optional[LexSolver] = None, solver: str = DEFAULT_SOLVER,
              deadline: Optional[float] = None) -> SolveResult:
    """Optimize layers from the highest priority down; returns the final model and costs."""
    ls = backend or LexSolver(p, solver, deadline)
    return ls.solve()


def block_and_next(r: SolveResult, p: ProblemCnf, backend: LexSolver) -> SolveResult:
    """Block ``r``'s DAG (every placement) and solve again with earlier bounds relaxed."""
    d = r.dag if r.dag is not None else decode(r.model, p)
    backend.block_model(r.model)
    backend.block(d)
    backend.seen.add(canonical_key(d))
    return backend.next()


__all__ = ["LexSolver", "OPTIMUM", "SATISFIABLE", "SolveResult", "SolveTimeout", "UNSAT",
           "block_and_next", "solve_lex"]
