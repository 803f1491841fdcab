"""Exact finite quantum-logic workbench.

Orthomodular property lattices (from tables or exact subspace closure),
contexts and the spectral presheaf, daseinisation, the bi-Heyting algebra of
clopen subobjects, the downset Heyting algebra, and belief revision over it.
"""

__version__ = "0.1.0"

from .downsets import Downset, d_implies, d_join, d_meet, d_neg, lift_sasaki, principal  # noqa: E402
from .instances import fixture_path, load_instance  # noqa: E402
from .lattice import CapacityError, DomainError, LatticeError, PropertyLattice  # noqa: E402

__all__ = [
    "CapacityError",
    "DomainError",
    "Downset",
    "LatticeError",
    "PropertyLattice",
    "__version__",
    "d_implies",
    "d_join",
    "d_meet",
    "d_neg",
    "fixture_path",
    "lift_sasaki",
    "load_instance",
    "principal",
]
