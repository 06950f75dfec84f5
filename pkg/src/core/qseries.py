"""
Exact integer power series.

Truncated q-series with arbitrary-precision integer coefficients, the eta
quotient and congruence product expansions that serve as the ground truth for
every formula, and series reciprocals.

Notation: f(q) = prod_{j>=1} (1 - q^j)^{-1}, so an eta quotient
prod f(q^m)^e is a product of Euler products (q^m; q^m)_inf^{-e}.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from utils.errors import DomainError
from .numtheory import lcm_all


@dataclass(frozen=True)
class IntSeries:
    """Coefficients a(0..N) of a power series truncated after q^N."""
    coeffs: Tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, N: int) -> "IntSeries":
        if not 0 <= N <= self.N:
            raise DomainError("truncation order out of range", N=N, available=self.N)
        return IntSeries(self.coeffs[:N + 1])

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        N = min(self.N, other.N)
        return IntSeries(tuple(multiply(list(self.coeffs[:N + 1]), list(other.coeffs[:N + 1]), N)))

    @classmethod
    def one(cls, N: int) -> "IntSeries":
        return cls((1,) + (0,) * N)


class EtaFactor(BaseModel):
    """One factor f(q^m)^e."""
    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1, description="Multiplier of q")
    e: int = Field(..., description="Nonzero integer exponent")

    @field_validator("e")
    @classmethod
    def _nonzero(cls, value: int) -> int:
        if value == 0:
            raise ValueError("exponent must be nonzero")
        return value


class EtaQuotientSpec(BaseModel):
    """
    A generating function prod_j f(q^{m_j})^{e_j}.

    Factors are merged by multiplier and kept in ascending order of m; a
    multiplier whose merged exponent cancels to zero is dropped.
    """
    model_config = ConfigDict(frozen=True)

    factors: Tuple[EtaFactor, ...] = ()

    @model_validator(mode="after")
    def _canonical(self) -> "EtaQuotientSpec":
        merged = {}
        for factor in self.factors:
            merged[factor.m] = merged.get(factor.m, 0) + factor.e
        canonical = tuple(EtaFactor(m=m, e=e) for m, e in sorted(merged.items()) if e != 0)
        if canonical != self.factors:
            object.__setattr__(self, "factors", canonical)
        return self

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[int, int]]) -> "EtaQuotientSpec":
        return cls(factors=tuple(EtaFactor(m=m, e=e) for m, e in pairs))

    def pairs(self) -> List[Tuple[int, int]]:
        return [(factor.m, factor.e) for factor in self.factors]

    @property
    def L(self) -> int:
        """Least common multiple of the multipliers."""
        return lcm_all(factor.m for factor in self.factors)

    @property
    def net_exponent(self) -> int:
        return sum(factor.e for factor in self.factors)


class CongruenceFactor(BaseModel):
    """prod_{m>=0} (1 + sign*q^{modulus*m + residue})^exponent."""
    model_config = ConfigDict(frozen=True)

    modulus: int = Field(..., ge=1)
    residue: int = Field(..., ge=1)
    sign: int
    exponent: int

    @model_validator(mode="after")
    def _check(self) -> "CongruenceFactor":
        if self.residue > self.modulus:
            raise ValueError("residue must lie in 1..modulus")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.exponent == 0:
            raise ValueError("exponent must be nonzero")
        return self


class CongruenceProductSpec(BaseModel):
    """A literal product of factors (1 +/- q^{am+b})^{+/-1} over arithmetic progressions."""
    model_config = ConfigDict(frozen=True)

    factors: Tuple[CongruenceFactor, ...] = ()

    @classmethod
    def from_tuples(cls, tuples: Sequence[Tuple[int, int, int, int]]) -> "CongruenceProductSpec":
        return cls(factors=tuple(
            CongruenceFactor(modulus=a, residue=b, sign=s, exponent=e) for a, b, s, e in tuples
        ))


def multiply(a: List[int], b: List[int], N: int) -> List[int]:
    """Truncated product of two coefficient lists, skipping zero terms."""
    result = [0] * (N + 1)
    support = [(j, c) for j, c in enumerate(b[:N + 1]) if c]
    for i, x in enumerate(a[:N + 1]):
        if not x:
            continue
        for j, y in support:
            if i + j > N:
                break
            result[i + j] += x * y
    return result


def pentagonal_euler_product(N: int) -> List[int]:
    """Coefficients of (q; q)_inf up to q^N from the pentagonal number theorem."""
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    j = 1
    while j * (3 * j - 1) // 2 <= N:
        sign = -1 if j % 2 else 1
        coeffs[j * (3 * j - 1) // 2] += sign
        if j * (3 * j + 1) // 2 <= N:
            coeffs[j * (3 * j + 1) // 2] += sign
        j += 1
    return coeffs


def naive_euler_product(N: int) -> List[int]:
    """(q; q)_inf up to q^N by multiplying out (1 - q^j) one factor at a time."""
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    for j in range(1, N + 1):
        for i in range(N, j - 1, -1):
            coeffs[i] -= coeffs[i - j]
    return coeffs


def partition_numbers(N: int) -> List[int]:
    """p(0..N) by Euler's pentagonal recurrence."""
    p = [0] * (N + 1)
    p[0] = 1
    for n in range(1, N + 1):
        total, j = 0, 1
        while True:
            first = n - j * (3 * j - 1) // 2
            if first < 0:
                break
            sign = 1 if j % 2 else -1
            total += sign * p[first]
            second = n - j * (3 * j + 1) // 2
            if second >= 0:
                total += sign * p[second]
            j += 1
        p[n] = total
    return p


def naive_partition_numbers(N: int) -> List[int]:
    """p(0..N) by dividing out (1 - q^j) one factor at a time."""
    p = [0] * (N + 1)
    p[0] = 1
    for j in range(1, N + 1):
        for i in range(j, N + 1):
            p[i] += p[i - j]
    return p


def _stretch(coeffs: List[int], m: int, N: int) -> List[int]:
    """Substitute q -> q^m."""
    out = [0] * (N + 1)
    for i, c in enumerate(coeffs):
        if i * m > N:
            break
        out[i * m] = c
    return out


def expand_eta_quotient(spec: EtaQuotientSpec, N: int, accelerate: bool = True) -> IntSeries:
    """
    Exact coefficients of prod f(q^m)^e through q^N.

    Positive exponents multiply by partition generating functions, negative
    exponents by Euler products; no series division takes place.

    Args:
        spec: The eta quotient
        N: Truncation order
        accelerate: Use the pentagonal number theorem instead of naive products

    Returns:
        IntSeries with N + 1 coefficients
    """
    if N < 0:
        raise DomainError("order must be nonnegative", N=N)

    result = [1] + [0] * N
    for factor in spec.factors:
        order = N // factor.m
        if factor.e > 0:
            base = partition_numbers(order) if accelerate else naive_partition_numbers(order)
        else:
            base = pentagonal_euler_product(order) if accelerate else naive_euler_product(order)
        stretched = _stretch(base, factor.m, N)
        for _ in range(abs(factor.e)):
            result = multiply(result, stretched, N)
    return IntSeries(tuple(result))


def expand_congruence_product(spec: CongruenceProductSpec, N: int) -> IntSeries:
    """
    Exact expansion of a literal congruence product through q^N.

    Each binomial (1 + s*q^t) is applied in place; its inverse is the
    geometric series sum (-s)^i q^{ti}, applied as a running recurrence.
    """
    if N < 0:
        raise DomainError("order must be nonnegative", N=N)

    coeffs = [1] + [0] * N
    for factor in spec.factors:
        t = factor.residue
        while t <= N:
            for _ in range(abs(factor.exponent)):
                if factor.exponent > 0:
                    for i in range(N, t - 1, -1):
                        coeffs[i] += factor.sign * coeffs[i - t]
                else:
                    for i in range(t, N + 1):
                        coeffs[i] -= factor.sign * coeffs[i - t]
            t += factor.modulus
    return IntSeries(tuple(coeffs))


def series_reciprocal(s: IntSeries) -> IntSeries:
    """
    Reciprocal of a series with constant term +1 or -1.

    Args:
        s: Series to invert

    Returns:
        t with s*t = 1 + O(q^{N+1})
    """
    if s.coeffs[0] not in (1, -1):
        raise DomainError("constant term must be a unit", constant=s.coeffs[0])

    unit = s.coeffs[0]
    t = [unit] + [0] * s.N
    for n in range(1, s.N + 1):
        t[n] = -unit * sum(s.coeffs[i] * t[n - i] for i in range(1, n + 1))
    return IntSeries(tuple(t))
