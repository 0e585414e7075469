"""Conformal classification, Klein-Gordon symmetry conditions and Noether checks."""
from .conformal import (
    ConformalClass,
    ConformalKind,
    ckv_residuals,
    classify_conformal,
    conformal_factor,
    kg_symmetry_residual,
    kind_rank,
)
from .noether import (
    SymmetryCandidate,
    current_divergence,
    euler_lagrange,
    lagrangian,
    lift_to_point_symmetry,
    noether_condition_residual,
    noether_current,
    noether_gauge,
    onshell_divergence_residual,
    onshell_solution,
)
from .structure import RankDeficiency, StructureTable, fit_structure_constants
