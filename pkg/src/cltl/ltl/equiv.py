"""Random formulas/lassos and the "matches the target" check used by suites."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .evaluate import truth_table
from .formula import BINARY, UNARY, Formula, atom, to_string
from .trace import LassoTrace

COMMUTATIVE = ("&", "|")


def random_lasso(rng: random.Random, ap: Sequence[str], max_len: int,
                 min_len: int = 1) -> LassoTrace:
    n = rng.randint(min_len, max_len)
    states = [[rng.random() < 0.5 for _ in ap] for _ in range(n)]
    return LassoTrace.make(ap, states, rng.randrange(n))


def random_formula(rng: random.Random, ap: Sequence[str], size: int) -> Formula:
    """Uniform-ish random tree with exactly ``size`` nodes."""
    if size == 1:
        return atom(rng.choice(list(ap)))
    if size == 2 or rng.random() < 0.4:
        return Formula(rng.choice(UNARY), random_formula(rng, ap, size - 1))
    ls = rng.randint(1, size - 2)
    return Formula(rng.choice(BINARY), random_formula(rng, ap, ls),
                   random_formula(rng, ap, size - 1 - ls))


def normalize_commutative(f: Formula) -> Formula:
    """Sort operands of & and | by their printed form, bottom-up."""
    if f.is_atom:
        return f
    kids = [normalize_commutative(c) for c in f.children()]
    if f.kind in COMMUTATIVE:
        kids.sort(key=to_string)
    return Formula(f.kind, *kids)


def syntactically_equal_mod_commutativity(f: Formula, g: Formula) -> bool:
    return normalize_commutative(f) == normalize_commutative(g)


def semantically_agree(f: Formula, g: Formula, ap: Sequence[str], samples: int = 10_000,
                       max_len: int = 10, seed: int = 0) -> Optional[LassoTrace]:
    """Return a random lasso that tells ``f`` and ``g`` apart, or None."""
    rng = random.Random(seed)
    for _ in range(samples):
        t = random_lasso(rng, ap, max_len)
        if _root_value(f, t) != _root_value(g, t):
            return t
    return None


def implies_on_random(stronger: Formula, weaker: Formula, ap: Sequence[str],
                      samples: int = 10_000, max_len: int = 10, seed: int = 0) -> Optional[LassoTrace]:
    """Return a lasso where ``stronger`` holds but ``weaker`` fails, or None."""
    rng = random.Random(seed)
    for _ in range(samples):
        t = random_lasso(rng, ap, max_len)
        if _root_value(stronger, t) and not _root_value(weaker, t):
            return t
    return None


def _root_value(f: Formula, t: LassoTrace) -> bool:
    from .dag import formula_to_dag
    d = formula_to_dag(f)
    return truth_table(d, t)[d.root][0]


def matches_target(found: Formula, target: Formula, ap: Sequence[str],
                   samples: int = 10_000, seed: int = 0) -> bool:
    if syntactically_equal_mod_commutativity(found, target):
        return True
    return semantically_agree(found, target, ap, samples=samples, seed=seed) is None
