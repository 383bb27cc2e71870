"""Exact verification of Bismut–Ambrose–Singer Hermitian structures on Lie algebras and homogeneous spaces."""

__version__ = "0.1.0"

from .connections import Geometry, bismut, verdict_suite  # noqa: E402
from .hermitian import HermitianData  # noqa: E402
from .lie import LieAlgebra  # noqa: E402
from .pair import ReductivePair  # noqa: E402
from .rational import QArray, q  # noqa: E402

__all__ = ["Geometry", "HermitianData", "LieAlgebra", "QArray", "ReductivePair", "bismut", "q", "verdict_suite"]
