from .backend import DEFAULT_SOLVER, SatBackend, SolveTimeout
from .lex import (OPTIMUM, SATISFIABLE, UNSAT, LexSolver, SolveResult, block_and_next, solve_lex)
from .wcnf import (ExternalModelError, WcnfError, WcnfInstance, export_wcnf, layer_costs,
                   layer_weights, parse_external_model, parse_wcnf)

__all__ = [
    "DEFAULT_SOLVER", "ExternalModelError", "LexSolver", "OPTIMUM", "SATISFIABLE", "SatBackend",
    "SolveResult", "SolveTimeout", "UNSAT", "WcnfError", "WcnfInstance", "block_and_next",
    "export_wcnf", "layer_costs", "layer_weights", "parse_external_model", "parse_wcnf", "solve_lex",
]
