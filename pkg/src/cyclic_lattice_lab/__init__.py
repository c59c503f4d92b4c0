"""Exact lattice-point computations on integral cyclic polytopes."""
from .core import (
    CyclicPolytope,
    ParameterList,
    UnimodularTransform,
    build_polytope,
    delta_matrix_form,
    negate_params,
    translate_params,
)
from .facets import brute_force_facets, enumerate_facets, evaluate_sigma, is_gale_even, sigma_form
from .basis import b_vector, b_vector_recursive, c_basis, lattice_index, z_basis
from .lattice import LatticeSimplex, barycentric, contains, enumerate_points, sample_lattice_point
from .normality import (
    DecompositionCertificate,
    HoleReport,
    Normal,
    decompose_step,
    full_decompose,
    idp_check,
    normality_via_covering,
)
from .veryample import (
    WitnessFamily,
    build_witness_p,
    facet_subpolytope,
    verify_witness,
    vertex_local_certify,
    very_ample_obstruction,
)

__version__ = "0.1.0"

__all__ = [
    "CyclicPolytope",
    "ParameterList",
    "UnimodularTransform",
    "build_polytope",
    "delta_matrix_form",
    "negate_params",
    "translate_params",
    "brute_force_facets",
    "enumerate_facets",
    "evaluate_sigma",
    "is_gale_even",
    "sigma_form",
    "b_vector",
    "b_vector_recursive",
    "c_basis",
    "lattice_index",
    "z_basis",
    "LatticeSimplex",
    "barycentric",
    "contains",
    "enumerate_points",
    "sample_lattice_point",
    "DecompositionCertificate",
    "HoleReport",
    "Normal",
    "decompose_step",
    "full_decompose",
    "idp_check",
    "normality_via_covering",
    "WitnessFamily",
    "build_witness_p",
    "facet_subpolytope",
    "verify_witness",
    "vertex_local_certify",
    "very_ample_obstruction",
]
