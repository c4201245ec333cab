from .dag import SyntaxDag, canonical_key, dag_size, dag_to_formula, formula_to_dag, restrict
from .evaluate import consistent, evaluate, evaluate_fixpoint, truth_table
from .formula import (BINARY, OPERATORS, TEMPORAL, UNARY, Formula, FormulaSyntaxError, Prop,
                      atom, make_props, parse_formula, to_string, tree_size)
from .trace import LassoTrace, Sample, future_indices, normalize, succ
from .brute import brute_force_min_consistent, enumerate_formulas

__all__ = [
    "BINARY", "OPERATORS", "TEMPORAL", "UNARY",
    "Formula", "FormulaSyntaxError", "LassoTrace", "Prop", "Sample", "SyntaxDag",
    "atom", "brute_force_min_consistent", "canonical_key", "consistent", "dag_size",
    "dag_to_formula", "enumerate_formulas", "evaluate", "evaluate_fixpoint",
    "formula_to_dag", "future_indices", "make_props", "normalize", "parse_formula",
    "restrict", "succ", "to_string", "tree_size", "truth_table",
]
