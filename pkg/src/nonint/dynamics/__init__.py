"""Mechanics of the three-body problem and the variational system along the orbit."""

from .mechanics import (
    Branches, CollisionError, FullState, ReducedState, RelativeState,
    expand_relative, expand_rotating, hamiltonian_full, hamiltonian_reduced,
    hamiltonian_relative, reduce_relative, reduce_rotating, relative_jacobian,
    rotating_jacobian, symplectic_defect,
)
from .orbit import (
    BranchPointError, SingularPointError, first_integral_drift, fuchsian_transform,
    lagrange_orbit, nve_matrix, nve_matrix_fd, orbit_residual, variational_full,
)

__all__ = [
    "Branches", "BranchPointError", "CollisionError", "FullState", "ReducedState",
    "RelativeState", "SingularPointError", "expand_relative", "expand_rotating",
    "first_integral_drift", "fuchsian_transform", "hamiltonian_full", "hamiltonian_reduced",
    "hamiltonian_relative", "lagrange_orbit", "nve_matrix", "nve_matrix_fd",
    "orbit_residual", "reduce_relative", "reduce_rotating", "relative_jacobian",
    "rotating_jacobian", "symplectic_defect", "variational_full",
]
