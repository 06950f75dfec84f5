"""
Numerical verification of formulas against exact coefficients.

A formula is evaluated at every n in a range and compared with the exact
coefficients of its eta quotient; the report records the value at the top
of the range, the largest absolute error and whether rounding recovers
every coefficient.
"""

import csv
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple

import mpmath
from pydantic import BaseModel, Field

from core.qseries import EtaQuotientSpec, expand_eta_quotient
from evaluation.evaluator import evaluate_formula
from formulas.ir import RademacherFormula
from utils.config import get_settings
from utils.errors import CircleMethodError, DomainError, VerificationError
from utils.logging import PerformanceTimer, get_logger


logger = get_logger(__name__)


class VerificationReport(BaseModel):
    """Outcome of checking a formula on a range of n."""
    formula: str
    n_lo: int
    n_hi: int
    K: int
    digits: int
    value_at_nmax: int = Field(..., description="Exact coefficient at n_hi")
    rounded_value: int = Field(..., description="Formula value at n_hi rounded to an integer")
    formula_value: str = Field(..., description="Formula value at n_hi, six decimals")
    max_abs_error: float
    worst_n: int
    all_round_correct: bool
    max_imag_residual: float
    errors: Optional[List[float]] = Field(default=None, description="Per-n errors, verbose reports only")

    @property
    def passed(self) -> bool:
        return self.all_round_correct


def fixed_point(value: mpmath.mpf, places: int = 6) -> str:
    """
    Render a real with a fixed number of decimals and no float round trip.

    Args:
        value: The number
        places: Digits after the decimal point

    Returns:
        String such as ``"-12.500000"``
    """
    magnitude = int(abs(value))
    with mpmath.workdps(len(str(magnitude)) + places + 10):
        scaled = int(mpmath.nint(value * mpmath.mpf(10) ** places))
    sign = "-" if scaled < 0 else ""
    whole, fraction = divmod(abs(scaled), 10 ** places)
    return f"{sign}{whole}.{fraction:0{places}d}"


@lru_cache(maxsize=128)
def _expanded(spec: EtaQuotientSpec, N: int) -> Tuple[int, ...]:
    with PerformanceTimer("expand oracle", logger, spec=spec.pairs(), N=N):
        return expand_eta_quotient(spec, N).coeffs


def _cache_file(cache_dir: str, spec: EtaQuotientSpec) -> Path:
    label = "_".join(f"{m}x{e}" for m, e in spec.pairs())
    return Path(cache_dir) / f"eta_{label}.csv"


def _read_cache(path: Path, N: int) -> Optional[Tuple[int, ...]]:
    if not path.exists():
        return None
    with open(path, newline="") as handle:
        rows = list(csv.DictReader(handle))
    if len(rows) < N + 1:
        return None
    return tuple(int(row["coefficient"]) for row in rows[:N + 1])


def _write_cache(path: Path, coeffs: Tuple[int, ...]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["n", "coefficient"])
        writer.writerows(enumerate(coeffs))


def oracle_coefficients(spec: EtaQuotientSpec, N: int, cache_dir: Optional[str] = None) -> Tuple[int, ...]:
    """
    Exact coefficients 0..N of an eta quotient, cached in memory.

    Args:
        spec: The eta quotient
        N: Truncation order
        cache_dir: Optional directory of CSV coefficient tables

    Returns:
        Tuple of N + 1 integers
    """
    if cache_dir:
        path = _cache_file(cache_dir, spec)
        cached = _read_cache(path, N)
        if cached is not None:
            return cached
        coeffs = _expanded(spec, N)
        _write_cache(path, coeffs)
        logger.debug("oracle cached", path=str(path), N=N)
        return coeffs
    return _expanded(spec, N)


def verify_formula(
    f: RademacherFormula,
    n_lo: Optional[int] = None,
    n_hi: Optional[int] = None,
    K: Optional[int] = None,
    digits: Optional[int] = None,
    verbose: bool = False,
    cache_dir: Optional[str] = None,
) -> VerificationReport:
    """
    Compare a formula with the exact coefficients of its oracle.

    Args:
        f: Formula with an oracle spec
        n_lo: Lower end of the range (configured default when omitted)
        n_hi: Upper end of the range
        K: Truncation
        digits: Significant digits
        verbose: Keep the per-n error vector
        cache_dir: Optional directory for oracle CSV tables

    Returns:
        VerificationReport
    """
    harness = get_settings().harness
    n_lo = harness.n_lo if n_lo is None else n_lo
    n_hi = harness.n_hi if n_hi is None else n_hi
    K = harness.truncation if K is None else K
    digits = digits or get_settings().precision.digits
    if not 1 <= n_lo <= n_hi:
        raise DomainError("need 1 <= n_lo <= n_hi", n_lo=n_lo, n_hi=n_hi)

    oracle = oracle_coefficients(f.oracle, n_hi, cache_dir or harness.cache_dir)

    errors: List[float] = []
    max_error, worst_n, max_residual = -1.0, n_lo, 0.0
    all_correct = True
    last = None
    with PerformanceTimer("verify formula", logger, formula=f.name, n_lo=n_lo, n_hi=n_hi, K=K):
        for n in range(n_lo, n_hi + 1):
            try:
                result = evaluate_formula(f, n, K, digits)
            except CircleMethodError as exc:
                raise VerificationError(f"evaluation failed: {exc}", formula=f.name, n=n) from exc
            error = float(abs(result.value - oracle[n]))
            errors.append(error)
            if error > max_error:
                max_error, worst_n = error, n
            max_residual = max(max_residual, float(result.imag_residual))
            if result.rounded != oracle[n]:
                all_correct = False
                logger.info("rounding mismatch", formula=f.name, n=n, exact=oracle[n], rounded=result.rounded)
            last = result

    report = VerificationReport(
        formula=f.name,
        n_lo=n_lo,
        n_hi=n_hi,
        K=K,
        digits=digits,
        value_at_nmax=oracle[n_hi],
        rounded_value=last.rounded,
        formula_value=fixed_point(last.value),
        max_abs_error=max_error,
        worst_n=worst_n,
        all_round_correct=all_correct,
        max_imag_residual=max_residual,
        errors=errors if verbose else None,
    )
    logger.info("formula verified", formula=f.name, max_abs_error=round(max_error, 6), passed=all_correct)
    return report
