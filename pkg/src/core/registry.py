"""
Named generating functions.

Each entry pairs the eta quotient form of a partition generating function
with its literal product form (the way the identity is usually printed) and a
combinatorial description. Both expansions must agree; the test suite checks
this to order 200 for every entry.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from utils.errors import DomainError, RegistryLookupError
from .qseries import CongruenceProductSpec, EtaQuotientSpec


@dataclass(frozen=True)
class RegistryEntry:
    """A named generating function in both of its forms."""
    name: str
    eta: EtaQuotientSpec
    product: CongruenceProductSpec
    description: str
    notes: str = ""
    aliases: Tuple[str, ...] = field(default_factory=tuple)

    def __iter__(self):
        # (eta, product, description) unpacking
        return iter((self.eta, self.product, self.description))


def _entry(name, eta_pairs, product_tuples, description, notes="", aliases=()):
    return RegistryEntry(
        name=name,
        eta=EtaQuotientSpec.from_pairs(eta_pairs),
        product=CongruenceProductSpec.from_tuples(product_tuples),
        description=description,
        notes=notes,
        aliases=tuple(aliases),
    )


# Product tuples are (modulus, residue, sign, exponent) for prod_{m>=0} (1 + sign*q^{am+b})^exponent.
_ENTRIES: List[RegistryEntry] = [
    _entry(
        "p", [(1, 1)],
        [(1, 1, -1, -1)],
        "p(n), the number of partitions of n",
    ),
    _entry(
        "delta", [(1, 1), (2, -1)],
        [(2, 1, -1, -1)],
        "delta(n), the number of partitions of n into distinct parts, "
        "equivalently into odd parts",
        aliases=("s9", "s52", "s84", "s85"),
    ),
    _entry(
        "schur", [(1, 1), (2, -1), (3, -1), (6, 1)],
        [(6, 1, -1, -1), (6, 5, -1, -1)],
        "S(n), the number of partitions of n into parts congruent to 1 or 5 mod 6, "
        "equivalently into distinct parts congruent to 1 or 2 mod 3",
    ),
    _entry(
        "overpartition", [(1, 2), (2, -1)],
        [(1, 1, 1, 1), (1, 1, -1, -1)],
        "the number of overpartitions of n",
    ),
    _entry(
        "pod", [(1, 1), (2, -1), (4, 1)],
        [(2, 1, 1, 1), (2, 2, -1, -1)],
        "pod(n), the number of partitions of n in which no odd part is repeated",
    ),
    _entry(
        "s5", [(1, -1), (2, 2), (4, -1)],
        [(2, 2, 1, 1), (2, 1, -1, 1)],
        "signed distinct-part count: the product equals prod (1 + (-q)^m)",
        notes="S_5(n) = (-1)^n delta(n); this identification is analytic, not combinatorial",
    ),
    _entry(
        "s10", [(1, 2), (2, -3), (4, 1)],
        [(2, 1, 1, 1), (2, 1, -1, -1)],
        "the number of overpartitions of n with only odd parts",
    ),
    _entry(
        "s24", [(1, 2), (2, -1), (3, -2), (6, 1)],
        [(6, 3, -1, 2), (6, 6, -1, 1), (1, 1, 1, 1), (1, 1, -1, -1)],
        "coefficients of prod (1-q^{6m-3})^2 (1-q^{6m}) (1+q^m)/(1-q^m)",
        aliases=("s26",),
    ),
    _entry(
        "s27", [(1, 1), (2, -1), (3, -1), (4, 1), (6, 1), (12, -1)],
        [(6, 1, 1, 1), (6, 5, 1, 1), (6, 2, -1, -1), (6, 4, -1, -1)],
        "overpartitions of n where overlined parts are odd nonmultiples of 3 and "
        "nonoverlined parts are even nonmultiples of 6",
    ),
    _entry(
        "s76", [(1, 2), (2, -1), (3, -1), (6, 1), (9, 1), (18, -2)],
        [(18, 18, -1, 1), (18, 3, -1, 1), (18, 15, -1, 1), (2, 1, -1, -1), (1, 1, -1, -1)],
        "overpartitions of n where no nonoverlined part is congruent to 0, 3 or 15 mod 18",
    ),
    _entry(
        "s77", [(1, 2), (2, -1), (6, -1)],
        [(6, 6, -1, 1), (1, 1, 1, 1), (1, 1, -1, -1)],
        "overpartitions of n where no nonoverlined part is a multiple of 6",
    ),
    _entry(
        "s78", [(1, 2), (2, -1), (9, -2), (18, 1)],
        [(18, 18, -1, 1), (18, 9, -1, 2), (1, 1, 1, 1), (1, 1, -1, -1)],
        "coefficients of prod (1-q^{18m}) (1-q^{18m-9})^2 (1+q^m)/(1-q^m)",
    ),
    _entry(
        "s107", [(2, 2), (3, 1), (4, -1), (6, -3), (12, 1)],
        [(6, 6, -1, 1), (12, 9, 1, 1), (12, 3, 1, 1), (4, 2, -1, -1), (2, 2, -1, -1)],
        "overpartitions of n where overlined parts are even or +-3 mod 12 and "
        "nonoverlined parts are +-2 mod 6",
    ),
    _entry(
        "s110", [(1, 1), (2, -1), (4, 1), (12, -1)],
        [(12, 12, -1, 1), (4, 2, -1, 1), (1, 1, -1, -1)],
        "partitions of n into parts not congruent to 0, 2, 6, 10 mod 12",
        notes="follows the corrected form of the product",
    ),
    _entry(
        "s115", [(1, 1), (2, -1), (4, 1), (9, -1), (18, 1), (36, -1)],
        [(36, 36, -1, 1), (36, 27, -1, 1), (36, 9, -1, 1), (2, 1, -1, -1), (4, 4, -1, -1)],
        "partitions of n into parts not congruent to 0, +-9 mod 36 nor to 2 mod 4",
    ),
]

REGISTRY: Dict[str, RegistryEntry] = {entry.name: entry for entry in _ENTRIES}
ALIASES: Dict[str, str] = {alias: entry.name for entry in _ENTRIES for alias in entry.aliases}
# Products that coincide with a j-regular generating function.
REGULAR_ALIASES: Dict[str, int] = {"s8": 4, "s11": 4, "s51": 4, "s64": 4, "s92": 9}

_REGULAR_NAME = re.compile(r"^delta_(?:j\()?(\d+)\)?$")


def regular_partitions(j: int) -> RegistryEntry:
    """
    The j-regular partition generating function f(q)/f(q^j).

    Args:
        j: At least 2

    Returns:
        RegistryEntry named ``delta_<j>``
    """
    if j < 2:
        raise DomainError("j-regular partitions need j >= 2", j=j)
    return _entry(
        f"delta_{j}", [(1, 1), (j, -1)],
        [(j, b, -1, -1) for b in range(1, j)],
        f"delta_{j}(n), the number of {j}-regular partitions of n (no part divisible by {j}), "
        f"equivalently partitions in which no part appears {j} or more times",
    )


def registry_lookup(name: str) -> RegistryEntry:
    """
    Look up a generating function by name.

    Accepts the canonical names, ``delta_<j>`` or ``delta_j(<j>)`` for the
    j-regular family, and the aliases of coinciding products.

    Args:
        name: Registry name

    Returns:
        RegistryEntry (unpacks as eta, product, description)
    """
    key = name.strip().lower()
    if key in REGISTRY:
        return REGISTRY[key]
    if key in ALIASES:
        return REGISTRY[ALIASES[key]]
    if key in REGULAR_ALIASES:
        return regular_partitions(REGULAR_ALIASES[key])

    match = _REGULAR_NAME.match(key)
    if match:
        return regular_partitions(int(match.group(1)))

    raise RegistryLookupError("unknown generating function", name=name)


def registry_names() -> List[str]:
    """Canonical names in registry order."""
    return [entry.name for entry in _ENTRIES]


def find_by_spec(spec: EtaQuotientSpec) -> Optional[RegistryEntry]:
    """Registry entry with the given eta quotient, if any."""
    for entry in _ENTRIES:
        if entry.eta == spec:
            return entry
    pairs = spec.pairs()
    if len(pairs) == 2 and pairs[0] == (1, 1) and pairs[1][1] == -1:
        return regular_partitions(pairs[1][0])
    return None
