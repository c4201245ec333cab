"""Named constraint presets, written in the constraint language itself."""

from __future__ import annotations

from typing import Iterable

from .ast import Program
from .parser import parse_constraints

PRESETS = {
    # atoms are shared singletons, so reuse is only forbidden below operators
    "no-dag-reuse": """
        constraint all n in Nodes - AP : #(n.~(L + R)) <= 1;
        constraint no ((L & R).(Nodes - AP));
    """,
    "no-tautology": """
        constraint all n in N[->] : l(n) != r(n);
    """,
    "nnf": """
        constraint all n in N[!] : l(n) in AP;
    """,
    # G(phi -> F psi) with propositional phi and psi
    "liveness-pattern": """
        node nG : N[G];
        node nImp : N[->];
        node nF : N[F];
        constraint root = nG and l(root) = nImp and r(nImp) = nF;
        constraint no (subNodes(l(nImp)) & Temporal);
        constraint no (desc(nF) & Temporal);
    """,
}

DEFAULT_SIZE = "softempty[1] L;\nsoftempty[1] R;\n"


def prelude(ap: Iterable[str] = ()) -> dict[str, Program]:
    """Parse every preset over propositions ``ap``."""
    ap = tuple(ap)
    return {name: parse_constraints(src, ap) for name, src in PRESETS.items()}


def preset(name: str, ap: Iterable[str] = ()) -> Program:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    return parse_constraints(PRESETS[name], tuple(ap))


def default_size_objective(ap: Iterable[str] = ()) -> Program:
    """The size objective: every left and right child edge is a unit cost at priority 1."""
    return parse_constraints(DEFAULT_SIZE, tuple(ap))
