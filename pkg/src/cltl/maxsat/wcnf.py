"""WCNF interchange: flatten priority layers into dominating integer weights."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..encoder.encode import ProblemCnf

MAX_WEIGHT = 2**63 - 1


class WcnfError(ValueError):
    pass


@dataclass
class WcnfInstance:
    nvars: int
    hard: list[list[int]]
    soft: list[tuple[int, list[int]]]  # (weight, clause)
    top: int

    def dumps(self, comments: tuple[str, ...] = ()) -> str:
        lines = [f"c {c}" for c in comments]
        lines.append(f"p wcnf {self.nvars} {len(self.hard) + len(self.soft)} {self.top}")
        for c in self.hard:
            lines.append(" ".join(map(str, [self.top] + c + [0])))
        for w, c in self.soft:
            lines.append(" ".join(map(str, [w] + c + [0])))
        return "\n".join(lines) + "\n"

    def cost(self, model: dict[int, bool]) -> int:
        return sum(w for w, c in self.soft if not any(model.get(abs(l), False) == (l > 0) for l in c))


def layer_weights(sizes: list[int]) -> list[int]:
    """Weights for layers listed highest priority first.

    Each layer's unit weight is the product of (size + 1) over all lower layers,
    so one unit in a layer outweighs every lower layer together.
    """
    weights = []
    w = 1
    for size in reversed(sizes):
        weights.append(w)
        w *= size + 1
        if w > MAX_WEIGHT:
            w = MAX_WEIGHT + 1
    return list(reversed(weights))


def export_wcnf(p: ProblemCnf) -> WcnfInstance:
    sizes = [len(l.lits) for l in p.layers]
    weights = layer_weights(sizes)
    soft = []
    for layer, w in zip(p.layers, weights):
        soft.extend((w, [lit]) for lit in layer.lits)
    total = sum(w for w, _ in soft)
    top = total + 1
    if top > MAX_WEIGHT or any(w > MAX_WEIGHT for w in weights):
        raise WcnfError("layer weights exceed the 63-bit range; reduce the bound or the number of soft literals")
    return WcnfInstance(p.nvars, [list(c) for c in p.hard], soft, top)


def layer_costs(p: ProblemCnf, model: dict[int, bool]) -> list[tuple[int, int]]:
    """Rescore a model per layer (including constant offsets)."""
    return [(l.priority, l.cost(model)) for l in p.layers]


def parse_wcnf(text: str) -> WcnfInstance:
    """Read classic (``p wcnf V C TOP``) or headerless 2022 (``h`` hard lines) WCNF."""
    hard, soft = [], []
    nvars, top = 0, None
    classic = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) < 4 or parts[1] != "wcnf":
                raise WcnfError(f"bad header: {line!r}")
            nvars = int(parts[2])
            top = int(parts[4]) if len(parts) > 4 else None
            classic = True
            continue
        if parts[-1] != "0":
            raise WcnfError(f"clause not terminated by 0: {line!r}")
        if parts[0] == "h":
            lits = [int(x) for x in parts[1:-1]]
            hard.append(lits)
        else:
            w = int(parts[0])
            lits = [int(x) for x in parts[1:-1]]
            if classic and top is not None and w >= top:
                hard.append(lits)
            else:
                soft.append((w, lits))
        for l in lits:
            nvars = max(nvars, abs(l))
    if top is None:
        top = sum(w for w, _ in soft) + 1
    return WcnfInstance(nvars, hard, soft, top)


class ExternalModelError(ValueError):
    pass


def parse_external_model(text: str, nvars: Optional[int] = None) -> dict[int, bool]:
    """Read ``s``/``v`` lines from a MaxSAT solver.

    ``v`` lines may list signed literals (``v 1 -2 0``) or one 0/1 string
    (``v 10``); the form is detected automatically.
    """
    status = None
    vs: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v ") or line == "v":
            vs.extend(line[1:].split())
    if status is not None and status.upper() in ("UNSATISFIABLE", "UNSAT"):
        raise ExternalModelError("solver reported UNSATISFIABLE")
    if status is not None and status.upper() not in ("OPTIMUM FOUND", "SATISFIABLE", "UNKNOWN"):
        raise ExternalModelError(f"unrecognized status {status!r}")
    if not vs:
        raise ExternalModelError("no 'v' lines found")
    model: dict[int, bool] = {}
    if len(vs) == 1 and set(vs[0]) <= {"0", "1"} and vs[0] != "0" and not vs[0].startswith("-"):
        bits = vs[0]
        if len(bits) > 1 or nvars == 1:
            for i, ch in enumerate(bits, start=1):
                model[i] = ch == "1"
            return _fill(model, nvars)
    for tok in vs:
        try:
            lit = int(tok)
        except ValueError:
            raise ExternalModelError(f"bad literal {tok!r}") from None
        if lit == 0:
            continue
        model[abs(lit)] = lit > 0
    return _fill(model, nvars)


def _fill(model: dict[int, bool], nvars: Optional[int]) -> dict[int, bool]:
    if nvars is not None:
        for v in range(1, nvars + 1):
            model.setdefault(v, False)
    return model
