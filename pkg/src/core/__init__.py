"""
Exact arithmetic core: number theory, q-series, the multiplier system and
the registry of named generating functions.
"""

from .numtheory import (
    FordArcEndpoints,
    coprime_residues,
    dedekind_sum,
    divisors,
    farey,
    farey_neighbors,
    ford_arc_endpoints,
    jacobi_symbol,
    lcm_all,
    neg_mod_inverse,
    totient,
)
# omega itself is not re-exported: the name would shadow the core.omega submodule
from .omega import (
    ExactRootOfUnity,
    OmegaProductDescriptor,
    check_eta_functional_equation,
    omega_product,
    omega_theta_closed_form,
)
from .qseries import (
    CongruenceProductSpec,
    EtaQuotientSpec,
    IntSeries,
    expand_congruence_product,
    expand_eta_quotient,
    series_reciprocal,
)
from .registry import RegistryEntry, registry_lookup, registry_names, regular_partitions

__all__ = [
    "FordArcEndpoints",
    "coprime_residues",
    "dedekind_sum",
    "divisors",
    "farey",
    "farey_neighbors",
    "ford_arc_endpoints",
    "jacobi_symbol",
    "lcm_all",
    "neg_mod_inverse",
    "totient",
    "ExactRootOfUnity",
    "OmegaProductDescriptor",
    "check_eta_functional_equation",
    "omega_product",
    "omega_theta_closed_form",
    "CongruenceProductSpec",
    "EtaQuotientSpec",
    "IntSeries",
    "expand_congruence_product",
    "expand_eta_quotient",
    "series_reciprocal",
    "RegistryEntry",
    "registry_lookup",
    "registry_names",
    "regular_partitions",
]
