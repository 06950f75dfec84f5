"""
High-precision evaluation of truncated Rademacher-type formulas.
"""

from .bessel import bessel_i, bessel_i_three_halves, sinh_kernel
from .evaluator import EvalResult, evaluate_formula, evaluate_range, hr_asymptotic, phase_sum

__all__ = [
    "bessel_i",
    "bessel_i_three_halves",
    "sinh_kernel",
    "EvalResult",
    "evaluate_formula",
    "evaluate_range",
    "hr_asymptotic",
    "phase_sum",
]
