"""
The multiplier omega(h, k) of the partition generating function.

omega(h, k) = exp(pi*i*s(h, k)) with s the Dedekind sum. Values are kept as
exact rational angles; the closed form in terms of Jacobi symbols is
implemented independently as a cross-check.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd, log
from typing import Optional, Sequence, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, Field, field_validator

from utils.config import get_settings
from utils.errors import DomainError
from utils.logging import get_logger
from .numtheory import dedekind_sum, jacobi_symbol, neg_mod_inverse


logger = get_logger(__name__)


@dataclass(frozen=True)
class ExactRootOfUnity:
    """The number exp(pi*i*theta) with theta an exact rational in [0, 2)."""
    theta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "theta", Fraction(self.theta) % 2)

    def __mul__(self, other: "ExactRootOfUnity") -> "ExactRootOfUnity":
        return ExactRootOfUnity(self.theta + other.theta)

    def __truediv__(self, other: "ExactRootOfUnity") -> "ExactRootOfUnity":
        return ExactRootOfUnity(self.theta - other.theta)

    def __pow__(self, exponent: int) -> "ExactRootOfUnity":
        return ExactRootOfUnity(self.theta * exponent)

    def conjugate(self) -> "ExactRootOfUnity":
        return ExactRootOfUnity(-self.theta)

    @property
    def is_one(self) -> bool:
        return self.theta == 0

    def order(self) -> int:
        """Smallest m >= 1 with value**m == 1."""
        return (self.theta / 2).denominator

    def to_complex(self) -> mpmath.mpc:
        """Value at the current mpmath precision."""
        return mpmath.expjpi(mpmath.mpf(self.theta.numerator) / self.theta.denominator)

    def __str__(self) -> str:
        return f"exp(pi*i * {self.theta})"


ONE = ExactRootOfUnity(Fraction(0))


def omega_theta_closed_form(h: int, k: int) -> Fraction:
    """
    Angle of omega(h, k) from the Jacobi-symbol closed form.

    Both parity branches use the expression 2h - H + h^2 H with hH = -1 (mod k).
    """
    h %= k
    H = neg_mod_inverse(h, k)
    tail = Fraction(k * k - 1, 12 * k) * (2 * h - H + h * h * H)

    if k % 2 == 1:
        symbol = jacobi_symbol(-h, k)
        angle = -(Fraction(k - 1, 4) + tail)
    else:
        symbol = jacobi_symbol(-k, h)
        angle = -(Fraction(2 - h * k - h, 4) + tail)

    if symbol == -1:
        angle += 1
    return angle % 2


def omega_theta_odd_h(h: int, k: int) -> Fraction:
    """The odd-h branch of the closed form, valid whenever h is odd."""
    h %= k
    if h % 2 == 0:
        raise DomainError("branch needs odd h", h=h, k=k)
    H = neg_mod_inverse(h, k)
    tail = Fraction(k * k - 1, 12 * k) * (2 * h - H + h * h * H)
    angle = -(Fraction(2 - h * k - h, 4) + tail)
    if jacobi_symbol(-k, h) == -1:
        angle += 1
    return angle % 2


@lru_cache(maxsize=None)
def _omega_theta(h: int, k: int) -> Fraction:
    theta = dedekind_sum(h, k) % 2
    if get_settings().omega.debug_checks:
        closed = omega_theta_closed_form(h, k)
        if closed != theta:
            raise DomainError("omega closed form disagrees with Dedekind sum",
                              h=h, k=k, dedekind=theta, closed_form=closed)
    return theta


def omega(h: int, k: int) -> ExactRootOfUnity:
    """
    The multiplier omega(h, k).

    Args:
        h: Integer coprime to k, reduced into [0, k)
        k: Positive modulus

    Returns:
        ExactRootOfUnity with theta = s(h, k) mod 2
    """
    if k < 1:
        raise DomainError("modulus must be positive", k=k)
    if gcd(h, k) != 1:
        raise DomainError("h and k must be coprime", h=h, k=k)
    return ExactRootOfUnity(_omega_theta(h % k, k))


class OmegaTerm(BaseModel):
    """omega((m/g)h mod k/g, k/g)^e with g = gcd(m, k)."""
    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1)
    e: int

    @field_validator("e")
    @classmethod
    def _nonzero(cls, value: int) -> int:
        if value == 0:
            raise ValueError("exponent must be nonzero")
        return value


class OmegaProductDescriptor(BaseModel):
    """Product of multipliers attached to an eta quotient."""
    model_config = ConfigDict(frozen=True)

    terms: Tuple[OmegaTerm, ...] = ()

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[int, int]]) -> "OmegaProductDescriptor":
        return cls(terms=tuple(OmegaTerm(m=m, e=e) for m, e in pairs))

    def pairs(self):
        return [(term.m, term.e) for term in self.terms]

    def arguments(self, h: int, k: int):
        """(h', k', e) for every term at the pair (h, k)."""
        out = []
        for term in self.terms:
            g = gcd(term.m, k)
            k_reduced = k // g
            out.append((((term.m // g) * h) % k_reduced, k_reduced, term.e))
        return out


@lru_cache(maxsize=None)
def _omega_product_theta(desc: OmegaProductDescriptor, h: int, k: int) -> Fraction:
    theta = Fraction(0)
    for h_reduced, k_reduced, e in desc.arguments(h, k):
        theta += _omega_theta(h_reduced, k_reduced) * e
    return theta % 2


def omega_product(desc: OmegaProductDescriptor, h: int, k: int) -> ExactRootOfUnity:
    """
    Evaluate a multiplier product at (h, k).

    Args:
        desc: The descriptor
        h: Integer coprime to k
        k: Positive modulus

    Returns:
        prod_j omega((m_j/g_j)h mod k/g_j, k/g_j)^{e_j}
    """
    if k < 1:
        raise DomainError("modulus must be positive", k=k)
    if gcd(h, k) != 1:
        raise DomainError("h and k must be coprime", h=h, k=k)
    return ExactRootOfUnity(_omega_product_theta(desc, h % k, k))


def _truncated_f(q: mpmath.mpc, terms: int) -> mpmath.mpc:
    product = mpmath.mpc(1)
    power = mpmath.mpc(1)
    for _ in range(terms):
        power *= q
        product *= 1 - power
    return 1 / product


def check_eta_functional_equation(
    h: int,
    k: int,
    z: complex,
    N_trunc: Optional[int] = None,
    digits: int = 30,
) -> float:
    """
    Residual of the transformation law of f at (h, k, z).

    Compares f(exp(2 pi i (iz + h)/k)) with
    omega(h, k) exp(pi (1/z - z)/(12k)) sqrt(z) f(exp(2 pi i (i/z + H)/k)).

    Args:
        h: Integer coprime to k
        k: Positive modulus
        z: Point with positive real part
        N_trunc: Number of product factors; chosen from |q| when omitted
        digits: Working precision

    Returns:
        |LHS - RHS|
    """
    if gcd(h, k) != 1:
        raise DomainError("h and k must be coprime", h=h, k=k)

    with mpmath.workdps(digits):
        z = mpmath.mpc(z)
        if z.real <= 0:
            raise DomainError("z must have positive real part", z=complex(z))
        H = neg_mod_inverse(h, k)
        two_pi_i = 2j * mpmath.pi

        q_left = mpmath.exp(two_pi_i * (1j * z + h) / k)
        q_right = mpmath.exp(two_pi_i * (1j / z + H) / k)

        if N_trunc is None:
            radius = max(abs(q_left), abs(q_right))
            N_trunc = max(40, int(ceil(digits * log(10) / -float(mpmath.log(radius)))) + 5)

        lhs = _truncated_f(q_left, N_trunc)
        rhs = (
            omega(h, k).to_complex()
            * mpmath.exp(mpmath.pi * (1 / z - z) / (12 * k))
            * mpmath.sqrt(z)
            * _truncated_f(q_right, N_trunc)
        )
        residual = abs(lhs - rhs)

    logger.debug("functional equation residual", h=h, k=k, residual=float(residual), factors=N_trunc)
    return float(residual)
