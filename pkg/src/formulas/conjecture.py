"""
Conjectured Rademacher-type formulas for eta quotients.

The transformation law of f is applied factor by factor at
q = exp(2 pi i (h + iz)/k). With g = gcd(m, k), the factor f(q^m)^e turns
into omega((m/g)h mod k/g, k/g)^e, the exponential
exp((pi e / 12k)(g^2/(m z) - m z)) and sqrt((m/g) z)^e times a remainder
that tends to 1. Since every m divides L = lcm(m), g depends on k only
through d = gcd(k, L), which splits the k-sum into one case per divisor d.

A case contributes when the coefficient C_d of pi/(12kz) is positive. The
remaining integral is a Bessel integral, evaluated with

    x = (pi/k) sqrt((2/3) C_d (n + kappa)),   kappa = -sum(e m)/24,
    nu = 1 + r/2,                              r = sum(e).

Cases with C_d <= 0 are dropped without proof, so every emitted formula is
labeled ``conjectured`` until the harness has checked it numerically.
"""

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict

from core.numtheory import divisors
from core.omega import OmegaProductDescriptor
from core.qseries import EtaQuotientSpec
from core.registry import find_by_spec
from evaluation.evaluator import evaluate_formula
from utils.errors import ConjectureError, UnsupportedSpecError
from utils.logging import get_logger, log_performance
from .ir import (
    ALL_K,
    PI,
    BesselKernel,
    ExprNode,
    FormulaCase,
    KRestriction,
    RademacherFormula,
    Rational,
    Sqrt,
    Pow,
    const,
    linear,
    sqrt,
    surd,
)


logger = get_logger(__name__)


class CaseAnalysis(BaseModel):
    """What the transformation law gives for the k with gcd(k, L) = d."""
    model_config = ConfigDict(frozen=True)

    d: int
    g: Tuple[int, ...]
    C_d: Rational
    kappa: Rational
    r: int
    const_factor_squared: Rational
    omega_desc: OmegaProductDescriptor
    contributing: bool
    leading_gap: Rational
    single_term: bool

    def argument_square(self) -> Tuple[Fraction, Fraction]:
        """(alpha, beta) with k^2 x^2 / pi^2 = alpha n + beta."""
        alpha = Fraction(2, 3) * self.C_d
        return alpha, alpha * self.kappa

    def const_factor(self) -> ExprNode:
        """prod (m/g)^{e/2} as a surd."""
        return surd(self.const_factor_squared)


def _analyze_divisor(spec: EtaQuotientSpec, d: int) -> CaseAnalysis:
    pairs = spec.pairs()
    L = spec.L
    g = tuple(gcd(m, d) for m, _ in pairs)
    # Any other k in the class sees the same gcds.
    witness = d + L
    if g != tuple(gcd(m, witness) for m, _ in pairs):
        raise ConjectureError("gcd pattern is not constant on the case", d=d, L=L)

    C_d = sum((Fraction(e * gi * gi, m) for (m, e), gi in zip(pairs, g)), Fraction(0))
    kappa = Fraction(-sum(e * m for m, e in pairs), 24)
    squared = Fraction(1)
    for (m, e), gi in zip(pairs, g):
        squared *= Fraction(m, gi) ** e
    gap = min(Fraction(24 * gi * gi, m) for (m, _), gi in zip(pairs, g))

    contributing = C_d > 0
    single_term = not contributing or C_d <= gap
    if not single_term:
        logger.warning("second remainder term also grows", spec=pairs, d=d, C_d=str(C_d), gap=str(gap))

    return CaseAnalysis(
        d=d,
        g=g,
        C_d=C_d,
        kappa=kappa,
        r=spec.net_exponent,
        const_factor_squared=squared,
        omega_desc=OmegaProductDescriptor.from_pairs(pairs),
        contributing=contributing,
        leading_gap=gap,
        single_term=single_term,
    )


def analyze_cases(spec: EtaQuotientSpec) -> List[CaseAnalysis]:
    """
    Case analysis of an eta quotient.

    Args:
        spec: Nonempty eta quotient

    Returns:
        One CaseAnalysis per divisor d of L, ascending in d
    """
    if not spec.factors:
        raise ConjectureError("the eta quotient is empty")
    return [_analyze_divisor(spec, d) for d in divisors(spec.L)]


def _quarter_power(q: Fraction, numerator: int) -> ExprNode:
    """q^(numerator/4) for a positive rational q."""
    if numerator % 4 == 0:
        return const(q ** (numerator // 4))
    if numerator % 2 == 0:
        return surd(q ** (numerator // 2))
    return Sqrt(arg=surd(q ** numerator))


def _radical_power(u: ExprNode, numerator: int) -> ExprNode:
    """u^(numerator/4) for an expression u."""
    if numerator == 2:
        return sqrt(u)
    if numerator % 2 == 0:
        return Pow(base=Sqrt(arg=u), exponent=numerator // 2)
    return Pow(base=Sqrt(arg=Sqrt(arg=u)), exponent=numerator)


def _restriction(L: int, d: int) -> KRestriction:
    if L == 1:
        return ALL_K
    return KRestriction(kind="gcd", modulus=L, value=d)


@log_performance("conjecture formula")
def conjecture_formula(
    spec: EtaQuotientSpec,
    name: Optional[str] = None,
    sinh_form: bool = True,
) -> RademacherFormula:
    """
    Assemble the conjectured formula of an eta quotient.

    With radicand u = Qn + P for kappa = P/Q in lowest terms, every
    contributing case becomes

        r = 1:  (1/pi) sqrt(c^2 Q/2) sqrt(k) d/dn( sinh(x) / sqrt(u) )
        else:   pi u^{-nu/2} 2c (C Q/24)^{nu/2} k^{-1} I_nu(x)

    with c^2 the case's constant factor squared.

    Args:
        spec: The eta quotient
        name: Formula name; derived from the registry when omitted
        sinh_form: Use the elementary sinh kernel when r = 1

    Returns:
        RademacherFormula with status ``conjectured``

    Raises:
        UnsupportedSpecError: when the net exponent is negative
        ConjectureError: when no case contributes
    """
    analyses = analyze_cases(spec)
    r = spec.net_exponent
    if r < 0:
        raise UnsupportedSpecError("negative net exponent gives Bessel order below 1", r=r, spec=spec.pairs())

    contributing = [a for a in analyses if a.contributing]
    if not contributing:
        raise ConjectureError("no case contributes", spec=spec.pairs())

    kappa = contributing[0].kappa
    Q, P = kappa.denominator, kappa.numerator
    u = linear(Q, P)
    nu = 1 + Fraction(r, 2)
    use_sinh = sinh_form and r == 1

    if use_sinh:
        prefactor = 1 / PI
    else:
        prefactor = PI / _radical_power(u, 2 + r)

    cases = []
    for analysis in contributing:
        C, c_sq = analysis.C_d, analysis.const_factor_squared
        coefficient = PI * surd(2 * C / (3 * Q))
        if use_sinh:
            weight = surd(c_sq * Q / 2)
            kernel = BesselKernel(kind="sinh_derivative", order=nu, coefficient=coefficient, radicand=u)
            k_power = Fraction(1, 2)
        else:
            if r == 0:
                weight = surd(c_sq * C * Q / 6)
            else:
                weight = 2 * analysis.const_factor() * _quarter_power(C * Q / 24, 2 + r)
            kernel = BesselKernel(kind="bessel_i", order=nu, coefficient=coefficient, radicand=u)
            k_power = Fraction(-1)
        cases.append(FormulaCase(
            d=analysis.d,
            restriction=_restriction(spec.L, analysis.d),
            weight=weight,
            omega_desc=analysis.omega_desc,
            kernel=kernel,
            k_power=k_power,
        ))

    entry = find_by_spec(spec)
    if name is None:
        name = f"conjectured_{entry.name}" if entry else "conjectured"
    formula = RademacherFormula(
        name=name,
        prefactor=prefactor,
        cases=tuple(cases),
        oracle=spec,
        status="conjectured",
        description=entry.description if entry else "",
    )
    logger.info("formula conjectured", name=name, cases=[a.d for a in contributing], nu=str(nu))
    return formula


def compare_formulas(
    a: RademacherFormula,
    b: RademacherFormula,
    n_range: Sequence[int],
    K: Optional[int] = None,
    digits: Optional[int] = None,
) -> mpmath.mpf:
    """
    Largest relative deviation of two formulas.

    Args:
        a: First formula
        b: Reference formula
        n_range: Points n
        K: Truncation
        digits: Significant digits

    Returns:
        max over n of |a(n) - b(n)| / max(1, |b(n)|)
    """
    worst = mpmath.mpf(0)
    for n in n_range:
        left = evaluate_formula(a, n, K, digits).value
        right = evaluate_formula(b, n, K, digits).value
        worst = max(worst, abs(left - right) / max(1, abs(right)))
    return worst
