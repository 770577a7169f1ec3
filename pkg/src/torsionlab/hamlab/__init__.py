"""Numerical Hofer-geometry laboratory.

Phase spaces, closed-form Hamiltonians, elongation profiles, flows and
gauge transformations, strip quadrature, and the identity-verification
suites behind the action/energy estimates.
"""

from .fields import (
    HamiltonianField,
    HoferNorms,
    hofer_norms,
    normalize,
)
from .flow import flow, gauge_minus, gauge_plus
from .profiles import ElongationProfile, rho_k, rho_minus, rho_plus
from .spaces import (
    EuclideanSpace,
    PhaseSpace,
    ProductSpace,
    SphereSpace,
    euclidean_plane,
    product_space,
    sphere_space,
)
from .strips import StripMap, action, concatenate_strips, energy_functional, pullback_area
from .verify import (
    difference_hamiltonian,
    run_suite,
    suite_actiondiff,
    suite_energy,
    suite_hat,
    suite_hofer,
    verify_actiondiff,
    verify_action_telescoping,
    verify_energy_identity,
)

__all__ = [
    "ElongationProfile",
    "EuclideanSpace",
    "HamiltonianField",
    "HoferNorms",
    "PhaseSpace",
    "ProductSpace",
    "SphereSpace",
    "StripMap",
    "action",
    "concatenate_strips",
    "difference_hamiltonian",
    "energy_functional",
    "euclidean_plane",
    "flow",
    "gauge_minus",
    "gauge_plus",
    "hofer_norms",
    "normalize",
    "product_space",
    "pullback_area",
    "rho_k",
    "rho_minus",
    "rho_plus",
    "run_suite",
    "sphere_space",
    "suite_actiondiff",
    "suite_energy",
    "suite_hat",
    "suite_hofer",
    "verify_actiondiff",
    "verify_action_telescoping",
    "verify_energy_identity",
]
