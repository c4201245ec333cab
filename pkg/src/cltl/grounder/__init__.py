from .circuit import FALSE, TRUE, Circuit
from .cnf import CnfSink
from .ground import Grounder, ground_expr, ground_formula, ground_objective
from .universe import SymbolicUniverse, SymVal

__all__ = [
    "FALSE", "TRUE", "Circuit", "CnfSink", "Grounder", "SymVal", "SymbolicUniverse",
    "ground_expr", "ground_formula", "ground_objective",
]
