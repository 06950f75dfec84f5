"""
Circle-method toolkit

Exact coefficients of eta quotients, the Dedekind eta multiplier system,
Rademacher-type formulas as data, their high-precision evaluation, a
conjecture engine that derives such formulas from an eta quotient, and a
harness that checks them against the exact coefficients.
"""

__version__ = "0.1.0"
