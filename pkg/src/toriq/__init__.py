"""Exact-arithmetic quantum-deformation certificates for smooth complete fans.

Given a smooth complete fan, the package computes its primitive collections
and Mori cone, the rational cohomology ring with Poincare pairing, the
GKZ-type hypergeometric series over the truncated Novikov ring, and the
quantum-deformed Stanley-Reisner module -- and emits a machine-checkable
certificate replaying the comparison between the deformed module and the
quantum module at a chosen truncation order.  Everything runs on Python ints
and Fractions; there is no floating point anywhere.
"""

from .fan import Fan, make_fan, validate_complete, validate_smooth
from .catalog import CATALOG, builtin_fan
from .moricone import enumerate_effective, mori_data
from .cohomring import build_cohomology_ring, divisor_class, integrate
from .gkz import annihilation_certificate, i_function, leading_terms
from .batyrev import build_deformed_ideal, certify_isomorphism, module_matrices

__all__ = [
    "Fan",
    "make_fan",
    "validate_smooth",
    "validate_complete",
    "CATALOG",
    "builtin_fan",
    "mori_data",
    "enumerate_effective",
    "build_cohomology_ring",
    "divisor_class",
    "integrate",
    "i_function",
    "leading_terms",
    "annihilation_certificate",
    "build_deformed_ideal",
    "module_matrices",
    "certify_isomorphism",
]

__version__ = "0.1.0"
