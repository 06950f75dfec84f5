"""
Formula representation and the transcribed formulas.

The conjecture engine lives in ``formulas.conjecture``; it depends on the
evaluator and is imported from there directly.
"""

from .builtin import builtin_formula, builtin_names, hagis_regular
from .ir import (
    BesselKernel,
    FormulaCase,
    KRestriction,
    RademacherFormula,
    eval_expr,
    from_json,
    surd,
    to_json,
    to_latex,
)

__all__ = [
    "builtin_formula",
    "builtin_names",
    "hagis_regular",
    "BesselKernel",
    "FormulaCase",
    "KRestriction",
    "RademacherFormula",
    "eval_expr",
    "from_json",
    "surd",
    "to_json",
    "to_latex",
]
