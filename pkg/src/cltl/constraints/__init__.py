from .ast import (BinExpr, BinFormula, BoolConst, Call, Card, Compare, Comprehension, Const, Expr,
                  Formula, FuncDef, Kinds, NodeConst, NodeDecl, Not, Objective, Program, Quant,
                  RelRef, TupleLit, UnExpr, Var)
from .parser import (ConstraintError, ConstraintSyntaxError, ConstraintTypeError, check_program,
                     parse_constraints, parse_formula_text, parse_sources)
from .prelude import PRESETS, default_size_objective, prelude, preset
from .semantics import (ProgramVerdict, eval_expr, evaluate_program, holds, objective_cost,
                        witnesses)
from .unparse import expr_str, formula_str, unparse

__all__ = [
    "BinExpr", "BinFormula", "BoolConst", "Call", "Card", "Compare", "Comprehension", "Const",
    "ConstraintError", "ConstraintSyntaxError", "ConstraintTypeError", "Expr", "Formula",
    "FuncDef", "Kinds", "NodeConst", "NodeDecl", "Not", "Objective", "PRESETS", "Program",
    "ProgramVerdict", "Quant", "RelRef", "TupleLit", "UnExpr", "Var", "check_program",
    "default_size_objective", "eval_expr", "evaluate_program", "expr_str", "formula_str",
    "holds", "objective_cost", "parse_constraints", "parse_formula_text", "parse_sources", "prelude", "preset",
    "unparse", "witnesses",
]
