"""Shipped use-case suites and the desk-scale benchmark runner.

A suite is a directory holding ``traces.txt``, ``constraints.txt`` and
``expected.txt``. The last is ``key: value`` lines::

    command: learn | enumerate
    max-nodes: 7
    preset: liveness-pattern     (repeatable)
    limit: 10                    (enumerate only)
    timeout: 60
    expect: G(!(cs_0 & cs_1))    (repeatable)

``learn`` passes when its formula matches some ``expect`` line; ``enumerate``
passes when every ``expect`` line is matched by one of the solutions.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .io import parse_traces
from .ltl import Formula, Sample, parse_formula
from .ltl.equiv import matches_target
from .pipeline import LearnOptions, RunReport, enumerate_solutions, learn, load_program
from .constraints import Program


class SuiteError(ValueError):
    pass


@dataclass
class Suite:
    name: str
    sample: Sample
    program: Program
    command: str = "learn"
    max_nodes: int = 6
    presets: list[str] = field(default_factory=list)
    limit: int = 10
    timeout: Optional[float] = None
    expect: list[Formula] = field(default_factory=list)
    path: Optional[Path] = None

    def options(self) -> LearnOptions:
        return LearnOptions(max_nodes=self.max_nodes, timeout=self.timeout)


@dataclass
class SuiteOutcome:
    name: str
    passed: bool
    reports: list[RunReport]
    matched: list[str]
    missing: list[str]
    elapsed: float

    def line(self) -> str:
        got = "; ".join(r.formula for r in self.reports if r.formula) or "-"
        status = "PASS" if self.passed else "FAIL"
        tail = f"  missing: {', '.join(self.missing)}" if self.missing else ""
        if self.reports and len(self.reports) == 1:
            return f"{status} {self.name:24s} {self.elapsed:7.2f} s  {got}{tail}"
        return f"{status} {self.name:24s} {self.elapsed:7.2f} s  {len(self.reports)} solution(s){tail}"


def suite_root() -> Path:
    return Path(str(resources.files("cltl") / "suites"))


def suite_names(root: Optional[Path] = None) -> list[str]:
    root = root or suite_root()
    return sorted(p.name for p in root.iterdir() if (p / "expected.txt").is_file())


def parse_expected(text: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise SuiteError(f"expected.txt line {lineno}: want 'key: value'")
        out.setdefault(key.strip(), []).append(value.strip())
    return out


def load_suite(name_or_path: str | Path) -> Suite:
    path = Path(name_or_path)
    if not path.is_dir():
        path = suite_root() / str(name_or_path)
    if not (path / "expected.txt").is_file():
        raise SuiteError(f"no suite at {path}")
    sample = parse_traces((path / "traces.txt").read_text(encoding="utf-8"))
    kv = parse_expected((path / "expected.txt").read_text(encoding="utf-8"))
    presets = kv.get("preset", [])
    cfile = path / "constraints.txt"
    texts = [cfile.read_text(encoding="utf-8")] if cfile.is_file() else []
    prog = load_program(texts, sample.ap, presets)

    def one(key, conv, default):
        vals = kv.get(key)
        return conv(vals[-1]) if vals else default

    command = one("command", str, "learn")
    if command not in ("learn", "enumerate"):
        raise SuiteError(f"{path.name}: unknown command {command!r}")
    return Suite(path.name, sample, prog, command, one("max-nodes", int, 6), presets,
                 one("limit", int, 10), one("timeout", float, None),
                 [parse_formula(e, sample.ap) for e in kv.get("expect", [])], path)


def run_suite(s: Suite) -> SuiteOutcome:
    start = time.monotonic()
    opts = s.options()
    if s.command == "learn":
        reports = [learn(s.sample, s.program, opts)]
    else:
        reports = list(enumerate_solutions(s.sample, s.program, opts, s.limit))
    found = [r for r in reports if r.found]
    matched, missing = [], []
    for e in s.expect:
        if any(matches_target(r.dag.to_formula(), e, s.sample.ap) for r in found):
            matched.append(str(e))
        else:
            missing.append(str(e))
    ok_reports = all(r.verified for r in found)
    if s.command == "learn":
        passed = bool(found) and ok_reports and bool(matched)
        if passed:
            missing = []
    else:
        passed = ok_reports and not missing
    return SuiteOutcome(s.name, passed, reports, matched, missing, time.monotonic() - start)


def _run_named(name: str) -> SuiteOutcome:
    return run_suite(load_suite(name))


def run_bench(names: list[str], jobs: int = 1) -> list[SuiteOutcome]:
    """Run suites, in parallel processes when ``jobs > 1`` (one solver each)."""
    if jobs <= 1 or len(names) <= 1:
        return [_run_named(n) for n in names]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_run_named, names))
