"""Catalog of pp-wave isometry classes and their verification."""
from .classes import CLASS_IDS, DEFAULTS, canonical_id, class_params, get_class
from .model import (
    POTENTIAL_BODIES,
    Amendment,
    CatalogError,
    CommutatorEntry,
    Discrepancy,
    Generator,
    PotentialFamily,
    PPWaveClass,
)
from .plane import solve_plane_wave_basis
from .verifier import ClassReport, instantiate_potential, vacuum_check, verify_class

__all__ = [
    "CLASS_IDS",
    "DEFAULTS",
    "POTENTIAL_BODIES",
    "Amendment",
    "CatalogError",
    "ClassReport",
    "CommutatorEntry",
    "Discrepancy",
    "Generator",
    "PPWaveClass",
    "PotentialFamily",
    "canonical_id",
    "class_params",
    "get_class",
    "instantiate_potential",
    "solve_plane_wave_basis",
    "vacuum_check",
    "verify_class",
]
