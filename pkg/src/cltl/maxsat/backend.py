"""Incremental SAT backend on top of python-sat."""

from __future__ import annotations

import threading
import time
from typing import Iterable, Optional

from pysat.solvers import Solver

DEFAULT_SOLVER = "minisat22"
# pysat exposes no interrupt for CaDiCaL; those calls only see the deadline between calls
NO_INTERRUPT = ("cd", "cd15", "cd19", "cadical103", "cadical153", "cadical195")


class SolveTimeout(Exception):
    pass


class SatBackend:
    """add_clause / solve(assumptions) / model with a fresh-variable counter.

    Solving is deterministic for identical clause and assumption sequences.
    ``deadline`` (a ``time.monotonic()`` value) is checked before every call
    and, for solvers that support it, also interrupts a call in progress.
    """

    def __init__(self, nvars: int = 0, name: str = DEFAULT_SOLVER, deadline: Optional[float] = None):
        self.name = name
        self.solver = Solver(name=name)
        self.top = nvars
        self.deadline = deadline
        self.calls = 0
        self.wall = 0.0
        self._model: Optional[list[int]] = None

    def new_var(self) -> int:
        self.top += 1
        return self.top

    def add_clause(self, lits: Iterable[int]):
        lits = list(lits)
        if lits:
            self.top = max(self.top, max(abs(l) for l in lits))
        self.solver.add_clause(lits)

    def add_clauses(self, clauses: Iterable[Iterable[int]]):
        for c in clauses:
            self.add_clause(c)

    def solve(self, assumptions: Iterable[int] = ()) -> bool:
        assumptions = list(assumptions)
        start = time.monotonic()
        self.calls += 1
        timer = None
        if self.deadline is not None:
            remaining = self.deadline - start
            if remaining <= 0:
                raise SolveTimeout()
        if self.deadline is not None and self.name not in NO_INTERRUPT:
            timer = threading.Timer(remaining, self.solver.interrupt)
            timer.daemon = True
            timer.start()
        try:
            if timer is None:
                res = self.solver.solve(assumptions=assumptions)
            else:
                res = self.solver.solve_limited(assumptions=assumptions, expect_interrupt=True)
        finally:
            if timer is not None:
                timer.cancel()
                self.solver.clear_interrupt()
            self.wall += time.monotonic() - start
        if res is None:
            raise SolveTimeout()
        self._model = self.solver.get_model() if res else None
        return bool(res)

    def model(self) -> dict[int, bool]:
        if self._model is None:
            raise RuntimeError("no model available")
        m = {abs(l): l > 0 for l in self._model}
        for v in range(1, self.top + 1):
            m.setdefault(v, False)
        return m

    def stats(self) -> dict:
        s = dict(self.solver.accum_stats() or {})
        s.update({"solve_calls": self.calls, "sat_time": round(self.wall, 4)})
        return s

    def close(self):
        self.solver.delete()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
