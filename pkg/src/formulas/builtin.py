"""
Hand-transcribed Rademacher-type formulas.

Each formula mirrors its printed form: the prefactor in n, one case per
divisor class of k with its weight, the multiplier product and the kernel.
Divisor-indexed weights are stored per case as constants; the printed
closed form is kept in ``weight_display``. Multiplier descriptors are the
(m, e) lists of the underlying eta quotients.
"""

import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional

from core.numtheory import divisors
from core.omega import OmegaProductDescriptor
from core.registry import registry_lookup, regular_partitions
from utils.errors import DomainError, RegistryLookupError
from .ir import (
    ALL_K,
    D,
    N,
    ODD_K,
    ONE,
    PI,
    BesselKernel,
    ExprNode,
    FormulaCase,
    KRestriction,
    RademacherFormula,
    const,
    linear,
    sqrt,
    surd,
)


def _bessel(coefficient: ExprNode, radicand: ExprNode) -> BesselKernel:
    return BesselKernel(kind="bessel_i", order=Fraction(1), coefficient=coefficient, radicand=radicand)


def _sinh(coefficient: ExprNode, radicand: ExprNode) -> BesselKernel:
    return BesselKernel(kind="sinh_derivative", order=Fraction(3, 2), coefficient=coefficient, radicand=radicand)


def _gcd_is(modulus: int, value: int) -> KRestriction:
    return KRestriction(kind="gcd", modulus=modulus, value=value)


def _case(d, restriction, weight, omega_pairs, kernel, k_power=Fraction(-1)) -> FormulaCase:
    return FormulaCase(
        d=d,
        restriction=restriction,
        weight=weight,
        omega_desc=OmegaProductDescriptor.from_pairs(omega_pairs),
        kernel=kernel,
        k_power=Fraction(k_power),
    )


def _formula(name, symbol, prefactor, cases, oracle, description, weight_display=None):
    return RademacherFormula(
        name=name,
        symbol=symbol,
        prefactor=prefactor,
        cases=tuple(cases),
        oracle=registry_lookup(oracle).eta if isinstance(oracle, str) else oracle,
        status="transcribed",
        description=description,
        weight_display=weight_display,
    )


def rademacher_p() -> RademacherFormula:
    """Rademacher's convergent series for p(n)."""
    return _formula(
        "rademacher_p", "p(n)",
        1 / (PI * sqrt(2)),
        [_case(1, ALL_K, ONE, [(1, 1)],
               _sinh(PI * surd(Fraction(2, 3)), linear(1, Fraction(-1, 24))),
               k_power=Fraction(1, 2))],
        "p",
        "partitions of n",
    )


def hagis_distinct() -> RademacherFormula:
    return _formula(
        "hagis_distinct", r"\delta(n)",
        PI / sqrt(linear(24, 1)),
        [_case(1, ODD_K, ONE, [(1, 1), (2, -1)],
               _bessel(PI / (6 * sqrt(2)), linear(24, 1)))],
        "delta",
        "partitions of n into distinct parts",
    )


def hagis_regular(j: int) -> RademacherFormula:
    """
    The j-regular partition formula.

    Cases run over the divisors d of j with 0 < d < sqrt(j), restricted to
    gcd(k, j) = d, with weight sqrt(d(j - d^2)).

    Args:
        j: At least 2

    Returns:
        RademacherFormula named ``hagis_regular_<j>``
    """
    entry = regular_partitions(j)
    cases = [
        _case(d, _gcd_is(j, d), surd(d * (j - d * d)), [(1, 1), (j, -1)],
              _bessel(PI * surd(Fraction(j - d * d, 36 * j)), linear(24, j - 1)))
        for d in divisors(j) if d * d < j
    ]
    return _formula(
        f"hagis_regular_{j}", rf"\delta_{{{j}}}(n)",
        2 * PI / (j * sqrt(linear(24, j - 1))),
        cases,
        entry.eta,
        f"{j}-regular partitions of n",
        weight_display=r"\sqrt{d(j-d^2)}",
    )


_SCHUR = [(1, 1), (2, -1), (3, -1), (6, 1)]


def niven() -> RademacherFormula:
    return _formula(
        "niven", "S(n)",
        PI / sqrt(linear(36, -3)),
        [
            _case(d, _gcd_is(6, d), surd(weight), _SCHUR,
                  _bessel(PI / (3 * sqrt(6)), D * linear(12, -1)))
            for d, weight in ((1, 2), (6, 12))
        ],
        "schur",
        "partitions of n into parts congruent to 1 or 5 mod 6",
        weight_display=r"\sqrt{(d-2)(d-3)}",
    )


def overpartition() -> RademacherFormula:
    return _formula(
        "overpartition", r"\overline{p}(n)",
        1 / (2 * PI),
        [_case(1, ODD_K, ONE, [(1, 2), (2, -1)], _sinh(PI, N), k_power=Fraction(1, 2))],
        "overpartition",
        "overpartitions of n",
    )


def pod() -> RademacherFormula:
    return _formula(
        "pod", r"\mathrm{pod}(n)",
        2 / (PI * sqrt(6)),
        [
            _case(d, _gcd_is(4, d), surd(weight), [(1, 1), (2, -1), (4, 1)],
                  _sinh(PI * sqrt(D) / 4, linear(8, -1)), k_power=Fraction(1, 2))
            for d, weight in ((1, 12), (4, 6))
        ],
        "pod",
        "partitions of n with no repeated odd part",
        weight_display=r"\sqrt{(d-2)(5d-17)}",
    )


def s5() -> RademacherFormula:
    return _formula(
        "s5", "S_{5}(n)",
        2 * PI / sqrt(linear(24, 1)),
        [_case(2, KRestriction(kind="congruence", modulus=4, value=2), ONE,
               [(1, -1), (2, 2), (4, -1)],
               _bessel(PI / (3 * sqrt(2)), linear(24, 1)))],
        "s5",
        "signed distinct-part partitions",
    )


def s10() -> RademacherFormula:
    return _formula(
        "s10", "S_{10}(n)",
        PI / (4 * sqrt(N)),
        [_case(1, ODD_K, ONE, [(1, 2), (2, -3), (4, 1)], _bessel(PI / sqrt(2), N))],
        "s10",
        "overpartitions of n into odd parts",
    )


def s24() -> RademacherFormula:
    return _formula(
        "s24", "S_{24}(n)",
        PI / (3 * sqrt(2 * N)),
        [_case(1, _gcd_is(6, 1), ONE, [(1, 2), (2, -1), (3, -2), (6, 1)],
               _bessel(PI / sqrt(3), 2 * N))],
        "s24",
        "coefficients of the S_24 product",
    )


def s27() -> RademacherFormula:
    return _formula(
        "s27", "S_{27}(n)",
        PI / (9 * sqrt(linear(4, 1))),
        [
            _case(d, _gcd_is(12, d), const(weight),
                  [(1, 1), (2, -1), (3, -1), (4, 1), (6, 1), (12, -1)],
                  _bessel(PI / (2 * sqrt(3)), D * linear(4, 1)))
            for d, weight in ((1, 3), (4, 6))
        ],
        "s27",
        "restricted overpartitions into nonmultiples of 3",
        weight_display="(d-2)(2d-5)",
    )


def s76() -> RademacherFormula:
    return _formula(
        "s76", "S_{76}(n)",
        PI / (9 * sqrt(linear(2, 2))),
        [_case(1, _gcd_is(18, 1), ONE, [(1, 2), (2, -1), (3, -1), (6, 1), (9, 1), (18, -2)],
               _bessel(2 * PI / 3, linear(2, 2)))],
        "s76",
        "overpartitions avoiding nonoverlined parts 0, 3, 15 mod 18",
    )


def s77() -> RademacherFormula:
    return _formula(
        "s77", "S_{77}(n)",
        PI * sqrt(2) / (3 * sqrt(linear(12, 3))),
        [_case(1, _gcd_is(6, 1), ONE, [(1, 2), (2, -1), (6, -1)],
               _bessel(PI / 3, linear(8, 2)))],
        "s77",
        "overpartitions with no nonoverlined multiple of 6",
    )


def s78() -> RademacherFormula:
    return _formula(
        "s78", "S_{78}(n)",
        PI * sqrt(2) / (9 * sqrt(N)),
        [_case(1, _gcd_is(18, 1), ONE, [(1, 2), (2, -1), (9, -2), (18, 1)],
               _bessel(2 * PI / 3, 2 * N))],
        "s78",
        "coefficients of the S_78 product",
    )


def s107() -> RademacherFormula:
    # gcd(k, 12) = j exactly; gcd 4, 6 and 12 carry no contribution.
    return _formula(
        "s107", "S_{107}(n)",
        2 * PI / (3 * sqrt(linear(24, 3))),
        [
            _case(j, _gcd_is(12, j), surd(4 * j - 3),
                  [(2, 2), (3, 1), (4, -1), (6, -3), (12, 1)],
                  _bessel(PI / 6, (3 * D - 1) * linear(8, 1)))
            for j in (1, 2)
        ],
        "s107",
        "restricted overpartitions with parts even or +-3 mod 12",
        weight_display=r"\sqrt{4j-3}",
    )


def s110() -> RademacherFormula:
    return _formula(
        "s110", "S_{110}(n)",
        2 * PI / (9 * sqrt(linear(16, 6))),
        [
            _case(d, _gcd_is(12, d), surd(weight), [(1, 1), (2, -1), (4, 1), (12, -1)],
                  _bessel(PI * sqrt(1 + D) / 6, linear(8, 3)))
            for d, weight in ((1, 6), (4, 30))
        ],
        "s110",
        "partitions into parts not congruent to 0, 2, 6, 10 mod 12",
        weight_display=r"\sqrt{(d-2)(7d-13)}",
    )


def s115() -> RademacherFormula:
    return _formula(
        "s115", "S_{115}(n)",
        PI / (27 * sqrt(linear(1, 1))),
        [
            _case(d, _gcd_is(36, d), const(weight),
                  [(1, 1), (2, -1), (4, 1), (9, -1), (18, 1), (36, -1)],
                  _bessel(2 * sqrt(D) * PI / 3, linear(1, 1)))
            for d, weight in ((1, 3), (4, 6))
        ],
        "s115",
        "partitions into parts not congruent to 0, +-9 mod 36 nor 2 mod 4",
        weight_display="(d-2)(2d-5)",
    )


_BUILDERS: Dict[str, Callable[[], RademacherFormula]] = {
    "rademacher_p": rademacher_p,
    "hagis_distinct": hagis_distinct,
    "niven": niven,
    "overpartition": overpartition,
    "pod": pod,
    "s5": s5,
    "s10": s10,
    "s24": s24,
    "s27": s27,
    "s76": s76,
    "s77": s77,
    "s78": s78,
    "s107": s107,
    "s110": s110,
    "s115": s115,
}

_REGULAR_NAME = re.compile(r"^hagis_regular(?:_(\d+))?$")


def builtin_names() -> List[str]:
    """Names of the builtin formulas (the j-regular family listed as hagis_regular_<j>)."""
    return list(_BUILDERS) + ["hagis_regular_<j>"]


@lru_cache(maxsize=None)
def builtin_formula(name: str, j: Optional[int] = None) -> RademacherFormula:
    """
    Look up a builtin formula.

    Args:
        name: Builtin name; ``hagis_regular_<j>`` or ``hagis_regular`` with ``j``
        j: Parameter of the j-regular family

    Returns:
        The transcribed RademacherFormula
    """
    key = name.strip().lower()
    if key in _BUILDERS:
        return _BUILDERS[key]()

    match = _REGULAR_NAME.match(key)
    if match:
        parameter = int(match.group(1)) if match.group(1) else j
        if parameter is None:
            raise DomainError("hagis_regular needs the parameter j", name=name)
        return hagis_regular(parameter)

    raise RegistryLookupError("unknown builtin formula", name=name)
