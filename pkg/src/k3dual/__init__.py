"""Exact Picard lattices of toric K3 families and lattice-duality checks."""

from .discriminant import FiniteQuadraticForm, discriminant_form, forms_isomorphic, forms_opposite, torsion_order
from .errors import K3DualError
from .lattice import (
    GramLattice,
    SignaturePair,
    apply_basis_change,
    direct_sum,
    nikulin_embedding_check,
    parse_lattice,
    standard_lattice,
)
from .picard import intersection_matrix, picard_number, picard_rays, rk_l0, select_basis
from .pipeline import CaseDefinition, DualityReport, SearchConfig, builtin_cases, verify_pair
from .polytope import (
    HalfSpace,
    LatticeVector,
    Polytope3,
    WeightSystem,
    contains,
    convex_hull,
    is_reflexive,
    lattice_points,
    monomial_to_lattice_point,
    polar_dual,
    unimodular_equivalent,
)
from .search import find_embedding, find_hyperbolic_plane, find_isometry

__all__ = [
    "CaseDefinition", "DualityReport", "FiniteQuadraticForm", "GramLattice", "HalfSpace",
    "K3DualError", "LatticeVector", "Polytope3", "SearchConfig", "SignaturePair", "WeightSystem",
    "apply_basis_change", "builtin_cases", "contains", "convex_hull", "direct_sum",
    "discriminant_form", "find_embedding", "find_hyperbolic_plane", "find_isometry",
    "forms_isomorphic", "forms_opposite", "intersection_matrix", "is_reflexive", "lattice_points",
    "monomial_to_lattice_point", "nikulin_embedding_check", "parse_lattice", "picard_number",
    "picard_rays", "polar_dual", "rk_l0", "select_basis", "standard_lattice", "torsion_order",
    "unimodular_equivalent", "verify_pair",
]
