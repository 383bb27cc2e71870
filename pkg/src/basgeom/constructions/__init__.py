"""Example families, k-nilpotent triples, decision procedure, witnesses and products."""

from .catalog import CatalogEntry, catalog_build, catalog_names
from .knil import KNilpotentSpec, build_k_nilpotent, verify_k_nilpotent
from .nildecide import NilDecision, decide_nilpotent_bas, standard_structure
from .products import BASFactor, product_bas
from .witnesses import (
    ComplexSemisimpleData,
    TorusBundleData,
    canonical_as_connection,
    natred_witness,
)

__all__ = [
    "BASFactor",
    "CatalogEntry",
    "ComplexSemisimpleData",
    "KNilpotentSpec",
    "NilDecision",
    "TorusBundleData",
    "build_k_nilpotent",
    "canonical_as_connection",
    "catalog_build",
    "catalog_names",
    "decide_nilpotent_bas",
    "natred_witness",
    "product_bas",
    "standard_structure",
    "verify_k_nilpotent",
]
