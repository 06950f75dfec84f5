"""
Elementary number theory and Farey geometry.

Exact integer and rational routines used by the multiplier system and by the
Rademacher path: Jacobi symbols, Dedekind sums, Farey sequences, the Ford
circle arc endpoints and divisor bookkeeping.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Tuple

from utils.errors import DomainError


# Farey sequences longer than this are never materialized for neighbor lookups.
SCAN_LIMIT = 1000


@dataclass(frozen=True)
class FordArcEndpoints:
    """Endpoints of the Ford circle arc of h/k on the Rademacher path."""
    alpha_I: complex
    alpha_T: complex
    z_I: complex
    z_T: complex
    k_p: int
    k_s: int


def jacobi_symbol(a: int, n: int) -> int:
    """
    Jacobi symbol (a/n) for odd positive n.

    Args:
        a: Any integer, negative values allowed
        n: Odd positive modulus

    Returns:
        -1, 0 or 1
    """
    if n <= 0 or n % 2 == 0:
        raise DomainError("Jacobi symbol needs an odd positive modulus", n=n)

    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _require_coprime(h: int, k: int) -> None:
    if k <= 0:
        raise DomainError("modulus must be positive", k=k)
    if gcd(h, k) != 1:
        raise DomainError("h and k must be coprime", h=h, k=k)


def neg_mod_inverse(h: int, k: int) -> int:
    """Return H in [0, k) with h*H = -1 (mod k)."""
    _require_coprime(h, k)
    if k == 1:
        return 0
    return (-pow(h, -1, k)) % k


def sawtooth(x: Fraction) -> Fraction:
    """((x)) = x - floor(x) - 1/2 off the integers, 0 on them."""
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind_sum_direct(h: int, k: int) -> Fraction:
    """Dedekind sum s(h, k) from its definition, O(k) terms."""
    _require_coprime(h, k)
    return sum(
        (sawtooth(Fraction(mu, k)) * sawtooth(Fraction(h * mu, k)) for mu in range(1, k)),
        Fraction(0),
    )


def dedekind_sum(h: int, k: int) -> Fraction:
    """
    Dedekind sum s(h, k) through the reciprocity law.

    Uses s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12 together with
    periodicity in h, so the cost is that of the Euclidean algorithm.

    Args:
        h: Integer coprime to k (reduced mod k first)
        k: Positive modulus

    Returns:
        The exact rational s(h, k)
    """
    _require_coprime(h, k)
    h %= k

    total = Fraction(0)
    sign = 1
    while h != 0:
        total += sign * (Fraction(-1, 4) + Fraction(h * h + k * k + 1, 12 * h * k))
        sign = -sign
        h, k = k % h, h
    return total


def farey(N: int) -> List[Fraction]:
    """
    Proper Farey fractions of order N.

    Args:
        N: Order, at least 1

    Returns:
        All reduced h/k in [0, 1) with k <= N, strictly increasing
    """
    if N < 1:
        raise DomainError("Farey order must be at least 1", N=N)

    fractions = []
    a, b, c, d = 0, 1, 1, N
    while a < b:
        fractions.append(Fraction(a, b))
        step = (N + b) // d
        a, b, c, d = c, d, step * c - a, step * d - b
    return fractions


def _check_farey_member(h: int, k: int, N: int) -> None:
    if N < 1 or k < 1 or k > N or not 0 <= h < k or gcd(h, k) != 1:
        raise DomainError("fraction is not in the Farey sequence", h=h, k=k, N=N)


def _neighbor_denominators_scan(h: int, k: int, N: int) -> Tuple[int, int]:
    sequence = farey(N)
    index = sequence.index(Fraction(h, k))
    predecessor = sequence[index - 1]
    successor = sequence[(index + 1) % len(sequence)]
    return predecessor.denominator, successor.denominator


def _neighbor_denominators_modular(h: int, k: int, N: int) -> Tuple[int, int]:
    # Neighbors a/b of h/k satisfy |hb - ak| = 1; the one in F_N has the
    # largest admissible denominator in the residue class of b mod k.
    if k == 1:
        return N, N
    inverse = pow(h, -1, k)
    k_p = N - (N - inverse) % k
    k_s = N - (N + inverse) % k
    return k_p, k_s


def farey_neighbors(h: int, k: int, N: int, method: str = "auto") -> Tuple[int, int]:
    """
    Denominators of the cyclic Farey neighbors of h/k in F_N.

    The predecessor of 0/1 is (N-1)/N shifted by -1 and the successor of
    (N-1)/N is 0/1 shifted by +1, so both neighbor denominators always exist.

    Args:
        h: Numerator
        k: Denominator
        N: Farey order
        method: "scan", "modular" or "auto" (scan up to SCAN_LIMIT)

    Returns:
        (k_p, k_s)
    """
    _check_farey_member(h, k, N)
    if method == "auto":
        method = "scan" if N <= SCAN_LIMIT else "modular"
    if method == "scan":
        return _neighbor_denominators_scan(h, k, N)
    if method == "modular":
        return _neighbor_denominators_modular(h, k, N)
    raise DomainError("unknown neighbor method", method=method)


def ford_arc_endpoints(h: int, k: int, N: int) -> FordArcEndpoints:
    """
    Arc endpoints of the Ford circle C(h, k) on the Rademacher path P(N).

    Args:
        h: Numerator of a member of F_N
        k: Its denominator
        N: Farey order

    Returns:
        FordArcEndpoints in the tau-plane and in the z-plane
    """
    k_p, k_s = farey_neighbors(h, k, N)

    norm_p = k * k + k_p * k_p
    norm_s = k * k + k_s * k_s
    center = Fraction(h, k)

    alpha_I = complex(float(center - Fraction(k_p, k * norm_p)), float(Fraction(1, norm_p)))
    alpha_T = complex(float(center + Fraction(k_s, k * norm_s)), float(Fraction(1, norm_s)))
    z_I = complex(float(Fraction(k, norm_p)), float(Fraction(k_p, norm_p)))
    z_T = complex(float(Fraction(k, norm_s)), -float(Fraction(k_s, norm_s)))

    return FordArcEndpoints(alpha_I=alpha_I, alpha_T=alpha_T, z_I=z_I, z_T=z_T, k_p=k_p, k_s=k_s)


def divisors(n: int) -> List[int]:
    """Positive divisors of n in ascending order, by trial division."""
    if n < 1:
        raise DomainError("divisors needs a positive integer", n=n)

    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def lcm_all(values: Iterable[int]) -> int:
    """Least common multiple of positive integers (1 for an empty list)."""
    result = 1
    for value in values:
        if value < 1:
            raise DomainError("lcm needs positive integers", value=value)
        result = result * value // gcd(result, value)
    return result


def totient(n: int) -> int:
    """Euler's phi by trial division."""
    if n < 1:
        raise DomainError("totient needs a positive integer", n=n)
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def coprime_residues(k: int) -> List[int]:
    """The h in [0, k) with gcd(h, k) = 1; [0] for k = 1."""
    if k < 1:
        raise DomainError("modulus must be positive", k=k)
    return [h for h in range(k) if gcd(h, k) == 1]
