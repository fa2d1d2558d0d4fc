"""Finite pseudocomplemented De Morgan algebras: duality, congruences,
identities, the s.i. family B(i,m) and free BPK0 decompositions."""

from .algebra import (
    FiniteAlgebra,
    Lattice,
    ValidationReport,
    algebra_from_raw,
    algebra_to_raw,
    decompose_into_simples,
    direct_product,
    find_isomorphism,
    is_isomorphic,
    is_kleene,
    validate,
)
from .congruence import Congruence, congruence_lattice, is_simple, is_subdirectly_irreducible
from .constructions import SiDescriptor, build_si, homomorphisms, si_leq
from .duality import DualSpace, SpaceType, dual_space, space_type, upset_algebra
from .errors import PmAlgError
from .free import free_decomposition, sur_count
from .terms import holds, parse, variety_membership

__all__ = [
    "Congruence",
    "DualSpace",
    "FiniteAlgebra",
    "Lattice",
    "PmAlgError",
    "SiDescriptor",
    "SpaceType",
    "ValidationReport",
    "algebra_from_raw",
    "algebra_to_raw",
    "build_si",
    "congruence_lattice",
    "decompose_into_simples",
    "direct_product",
    "dual_space",
    "find_isomorphism",
    "free_decomposition",
    "holds",
    "homomorphisms",
    "is_isomorphic",
    "is_kleene",
    "is_simple",
    "is_subdirectly_irreducible",
    "parse",
    "si_leq",
    "space_type",
    "sur_count",
    "upset_algebra",
    "validate",
    "variety_membership",
]
