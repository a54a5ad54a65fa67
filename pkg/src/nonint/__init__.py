"""Certified non-integrability checks for the three-body Lagrange family.

The pipeline runs from exact mass parameters, through the Fuchsian normal
variational system along the Lagrange orbit, to numeric monodromy, exact
Frobenius series and a combined certificate.
"""

from .model import MassError, MassParameters, derive_constants, singular_points, spectral_data

__version__ = "0.1.0"

__all__ = [
    "MassError", "MassParameters", "__version__", "certify", "derive_constants",
    "residue_matrices", "singular_points", "spectral_data",
]


def __getattr__(name):
    # heavier layers load on first use
    if name == "certify":
        from .obstruction import certify
        return certify
    if name == "residue_matrices":
        from .fuchsian import residue_matrices
        return residue_matrices
    raise AttributeError(f"module 'nonint' has no attribute {name!r}")
