"""
Numerical evaluation of Rademacher-type formulas truncated at k <= K.

For every case and every admissible k the inner sum over h runs over the
reduced residues mod k. Each summand's phase e^{-2 pi i n h/k} times the
multiplier product is combined as an exact rational angle and converted to
a floating complex number once. The summation order (cases, then k, then h)
is fixed so results are reproducible bit for bit.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import mpmath

from core.numtheory import coprime_residues
from core.omega import ExactRootOfUnity, OmegaProductDescriptor, omega_product
from formulas.ir import BesselKernel, RademacherFormula, evaluate
from utils.config import get_settings
from utils.errors import CircleMethodError, DomainError, FormulaEvaluationError
from utils.logging import PerformanceTimer, get_logger
from .bessel import bessel_i, sinh_kernel


logger = get_logger(__name__)


@dataclass(frozen=True)
class EvalResult:
    """Value of a truncated formula."""
    value: mpmath.mpf
    rounded: int
    k_used: int
    imag_residual: mpmath.mpf
    digits: int

    def error_against(self, exact: int) -> mpmath.mpf:
        return abs(self.value - exact)


@lru_cache(maxsize=65536)
def _phase_angles(desc: OmegaProductDescriptor, n_mod_k: int, k: int) -> Tuple[Fraction, ...]:
    """Exact angles (in units of pi) of Omega(h, k) e^{-2 pi i n h/k} for every reduced h."""
    angles = []
    for h in coprime_residues(k):
        root = omega_product(desc, h, k) * ExactRootOfUnity(Fraction(-2 * n_mod_k * h, k))
        angles.append(root.theta)
    return tuple(angles)


def phase_sum(desc: OmegaProductDescriptor, n: int, k: int) -> mpmath.mpc:
    """sum_h Omega(h, k) e^{-2 pi i n h/k} at the current precision."""
    total = mpmath.mpc(0)
    for theta in _phase_angles(desc, n % k, k):
        total += mpmath.expjpi(mpmath.mpf(theta.numerator) / theta.denominator)
    return total


def _k_factor(k: int, power: Fraction) -> mpmath.mpf:
    if power.denominator == 1:
        return mpmath.mpf(k) ** power.numerator
    return mpmath.power(k, mpmath.mpf(power.numerator) / power.denominator)


def _kernel_value(kernel: BesselKernel, bindings, k: int) -> mpmath.mpf:
    coefficient = evaluate(kernel.coefficient, bindings)
    radicand = evaluate(kernel.radicand, bindings)
    if kernel.kind == "sinh_derivative":
        slope = evaluate(kernel.radicand.diff("n"), bindings)
        return slope * sinh_kernel(radicand, k, coefficient)
    if radicand < 0:
        raise DomainError("negative radicand in the Bessel argument", radicand=mpmath.nstr(radicand, 15))
    return bessel_i(kernel.order, coefficient * mpmath.sqrt(radicand) / k)


def _working_digits(digits: Optional[int]) -> Tuple[int, int]:
    precision = get_settings().precision
    digits = digits or precision.digits
    if digits < 15:
        raise DomainError("precision must be at least 15 digits", digits=digits)
    return digits, digits + precision.guard_digits


def evaluate_formula(
    f: RademacherFormula,
    n: int,
    K: Optional[int] = None,
    digits: Optional[int] = None,
) -> EvalResult:
    """
    Evaluate a formula at n, summing every admissible k <= K.

    Args:
        f: The formula
        n: Positive integer
        K: Truncation; the configured default when omitted
        digits: Significant digits; the configured default when omitted

    Returns:
        EvalResult with the real part as value and |imaginary part| as residual
    """
    if K is None:
        K = get_settings().evaluator.truncation
    if n < 1:
        raise DomainError("n must be positive", n=n)
    if K < 1:
        raise DomainError("truncation must be positive", K=K)
    digits, working = _working_digits(digits)

    used = set()
    with mpmath.workdps(working):
        try:
            prefactor = evaluate(f.prefactor, {"n": n})
        except CircleMethodError as exc:
            raise FormulaEvaluationError(f"prefactor failed: {exc.message}", formula=f.name, n=n) from exc

        total = mpmath.mpc(0)
        for case in f.cases:
            bindings = {"n": n, "d": case.d}
            weight = evaluate(case.weight, bindings)
            for k in range(1, K + 1):
                if not case.restriction.admits(k):
                    continue
                try:
                    kernel = _kernel_value(case.kernel, bindings, k)
                    phases = phase_sum(case.omega_desc, n, k)
                except CircleMethodError as exc:
                    raise FormulaEvaluationError(
                        f"kernel failed: {exc.message}", formula=f.name, case=case.d, k=k, n=n,
                        h=exc.context.get("h"),
                    ) from exc
                total += weight * _k_factor(k, case.k_power) * phases * kernel
                used.add(k)

        result = prefactor * total
        value = result.real
        residual = abs(result.imag)
        rounded = int(mpmath.nint(value))

    return EvalResult(value=value, rounded=rounded, k_used=len(used), imag_residual=residual, digits=digits)


def evaluate_range(
    f: RademacherFormula,
    ns: Iterable[int],
    K: Optional[int] = None,
    digits: Optional[int] = None,
) -> List[EvalResult]:
    """evaluate_formula at every n of ns, in order."""
    ns = list(ns)
    with PerformanceTimer("evaluate_range", logger, formula=f.name, points=len(ns), K=K):
        return [evaluate_formula(f, n, K, digits) for n in ns]


def hr_asymptotic(n: int, digits: Optional[int] = None) -> mpmath.mpf:
    """
    Leading-order estimate exp(pi sqrt(2n/3)) / (4 n sqrt(3)) of p(n).

    Args:
        n: Positive integer
        digits: Significant digits; the configured default when omitted

    Returns:
        The estimate
    """
    if n < 1:
        raise DomainError("n must be positive", n=n)
    digits, working = _working_digits(digits)
    with mpmath.workdps(working):
        return mpmath.exp(mpmath.pi * mpmath.sqrt(mpmath.mpf(2 * n) / 3)) / (4 * n * mpmath.sqrt(3))
