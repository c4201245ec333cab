"""cltl: learn LTL formulas from lasso traces under syntactic constraints."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import SuiteError, run_bench, suite_names
from .constraints import PRESETS, ConstraintError
from .io import TraceFileError, parse_traces
from .ltl import FormulaSyntaxError
from .maxsat import DEFAULT_SOLVER, ExternalModelError, WcnfError
from .pipeline import (EXIT_INPUT, EXIT_OK, EXIT_TIMEOUT, EXIT_UNSAT, EXIT_VERIFY, TIMEOUT,
                       LearnOptions, enumerate_solutions, export, import_model, learn, load_program,
                       oracle, verify_formula)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None


def _inputs(args):
    sample = parse_traces(_read(args.traces))
    texts = [_read(c) for c in args.constraints]
    prog = load_program(texts, sample.ap, args.preset)
    return sample, prog


def _options(args) -> LearnOptions:
    if args.max_nodes < 1:
        raise InputError("--max-nodes must be at least 1")
    return LearnOptions(max_nodes=args.max_nodes, default_size=not args.no_default_size,
                        tree_mode=args.tree, iterative=getattr(args, "iterative", False),
                        timeout=args.timeout, solver=args.solver,
                        co_optimal=getattr(args, "co_optimal", False))


def _emit(report, args, out):
    out.write(report.render(args.output))
    out.flush()
    return report.exit_code


def cmd_learn(args, out) -> int:
    sample, prog = _inputs(args)
    return _emit(learn(sample, prog, _options(args)), args, out)


def cmd_enumerate(args, out) -> int:
    sample, prog = _inputs(args)
    opts = _options(args)
    code, count, timed_out = EXIT_OK, 0, False
    for r in enumerate_solutions(sample, prog, opts, args.limit):
        if r.found:
            count += 1
            if not r.verified:
                code = EXIT_VERIFY
            _emit(r, args, out)
        elif r.status == TIMEOUT:
            timed_out = True
            _emit(r, args, out)
        elif args.output == "human":
            out.write(f"{r.note}\n")
    if args.output == "machine":
        out.write(f"solutions: {count}\n")
    else:
        out.write(f"{count} solution(s)\n")
    if code == EXIT_OK and timed_out:
        code = EXIT_TIMEOUT
    if code == EXIT_OK and count == 0 and args.limit > 0:
        code = EXIT_UNSAT
    return code


def cmd_verify(args, out) -> int:
    sample, prog = _inputs(args)
    r = verify_formula(sample, prog, args.formula, n=args.max_nodes,
                       default_size=not args.no_default_size)
    return _emit(r, args, out)


def cmd_oracle(args, out) -> int:
    sample, prog = _inputs(args)
    try:
        r = oracle(sample, prog, args.max_size, force=args.force)
    except ValueError as e:
        raise InputError(str(e)) from None
    return _emit(r, args, out)


def cmd_export(args, out) -> int:
    sample, prog = _inputs(args)
    p, text, sidecar = export(sample, prog, _options(args))
    wcnf = Path(args.wcnf)
    vmap = Path(args.varmap) if args.varmap else wcnf.with_suffix(wcnf.suffix + ".vars")
    try:
        wcnf.write_text(text, encoding="utf-8")
        vmap.write_text(sidecar, encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write: {e}") from None
    nsoft = sum(len(l.lits) for l in p.layers)
    if args.output == "machine":
        out.write(f"command: export-wcnf\nwcnf: {wcnf}\nvarmap: {vmap}\nvars: {p.nvars}\n"
                  f"hard: {len(p.hard)}\nsoft: {nsoft}\n")
    else:
        out.write(f"wrote {wcnf} ({p.nvars} vars, {len(p.hard)} hard, {nsoft} soft) and {vmap}\n")
    return EXIT_OK


def cmd_import(args, out) -> int:
    sample, prog = _inputs(args)
    side = _read(args.varmap) if args.varmap else None
    return _emit(import_model(sample, prog, _options(args), _read(args.model), side), args, out)


def cmd_bench(args, out) -> int:
    names = args.suites or suite_names()
    outcomes = run_bench(names, jobs=args.jobs)
    for o in outcomes:
        if args.output == "machine":
            out.write(f"suite: {o.name}\nresult: {'pass' if o.passed else 'fail'}\ntime: {o.elapsed:.3f}\n")
            for r in o.reports:
                if r.formula:
                    out.write(f"formula: {r.formula}\n")
            for m in o.missing:
                out.write(f"missing: {m}\n")
        else:
            out.write(o.line() + "\n")
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_UNSAT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cltl", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, solving=True):
        p.add_argument("traces", help="trace file (positives --- negatives [--- propositions])")
        p.add_argument("-c", "--constraints", action="append", default=[], metavar="FILE",
                       help="constraint file (repeatable)")
        p.add_argument("--preset", action="append", default=[], choices=sorted(PRESETS),
                       help="add a named constraint preset (repeatable)")
        p.add_argument("--output", choices=("human", "machine"), default="human")
        if solving:
            p.add_argument("-n", "--max-nodes", type=int, default=6, help="DAG node bound (default 6)")
            p.add_argument("--no-default-size", action="store_true",
                           help="do not add the default size objective")
            p.add_argument("--tree", action="store_true", help="forbid operator reuse (no-dag-reuse preset)")
            p.add_argument("--timeout", type=float, default=None, help="seconds")
            p.add_argument("--solver", default=DEFAULT_SOLVER, help=f"pysat solver name (default {DEFAULT_SOLVER})")

    p = sub.add_parser("learn", help="find one optimal formula")
    common(p)
    p.add_argument("--iterative", action="store_true",
                   help="grow the bound from the smallest satisfiable size, then optimize there")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("enumerate", help="list solutions in objective order")
    common(p)
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--co-optimal", action="store_true", help="only solutions with the optimal costs")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="check a given formula against traces and constraints")
    common(p, solving=False)
    p.add_argument("--formula", required=True)
    p.add_argument("-n", "--max-nodes", type=int, default=None,
                   help="universe size for maximize costs (default: the formula's DAG size)")
    p.add_argument("--no-default-size", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-wcnf", help="write the MaxSAT instance for an external solver")
    common(p)
    p.add_argument("--wcnf", required=True, metavar="PATH")
    p.add_argument("--varmap", metavar="PATH", help="sidecar path (default PATH.vars)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("import-model", help="decode and verify an external solver's model")
    common(p)
    p.add_argument("--model", required=True, metavar="PATH", help="solver output with a v-line")
    p.add_argument("--varmap", metavar="PATH", help="sidecar written by export-wcnf, checked if given")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("oracle", help="brute-force minimum tree size (small bounds only)")
    common(p, solving=False)
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--force", action="store_true", help="allow --max-size above 8")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run the shipped use-case suites")
    p.add_argument("suites", nargs="*", help=f"suite names (default: all of {', '.join(suite_names())})")
    p.add_argument("-j", "--jobs", type=int, default=1)
    p.add_argument("--output", choices=("human", "machine"), default="human")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, TraceFileError, ConstraintError, FormulaSyntaxError, SuiteError,
            ExternalModelError, WcnfError, KeyError) as e:
        print(f"cltl: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        # config validation (bound too small, model does not match the instance)
        print(f"cltl: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
