"""Spectral methods on triangles through a one-to-one rectangle-triangle map."""
from .assembly import boundary_vector, discrete_inner, load_vector, mass_matrix, stiffness_matrix
from .basis import Basis, BasisKind, Geometry, grad_coeffs, interpolate
from .exceptions import (
    AccuracyError,
    ConvergenceError,
    CoverageError,
    DegenerateTriangleError,
    DimensionError,
    DomainError,
    FactorizationError,
    TrispecError,
    WellPosednessError,
)
from .mapping import GridKind, TriangleMap, mapped_lgl_grid, ref_forward, ref_inverse
from .polyquad import gauss_rule, lgl_rule
from .problems import PROBLEMS, Problem
from .singular import SingularTable, build_table, cached_table, oracle_ahat, oracle_table
from .solver import (
    ConvergenceReport,
    SpectralSolution,
    assemble_system,
    convergence_study,
    error_norms,
    evaluate,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "Basis",
    "BasisKind",
    "ConvergenceError",
    "ConvergenceReport",
    "CoverageError",
    "DegenerateTriangleError",
    "DimensionError",
    "DomainError",
    "FactorizationError",
    "Geometry",
    "GridKind",
    "PROBLEMS",
    "Problem",
    "SingularTable",
    "SpectralSolution",
    "TriangleMap",
    "TrispecError",
    "WellPosednessError",
    "assemble_system",
    "boundary_vector",
    "build_table",
    "cached_table",
    "convergence_study",
    "discrete_inner",
    "error_norms",
    "evaluate",
    "gauss_rule",
    "grad_coeffs",
    "interpolate",
    "lgl_rule",
    "load_vector",
    "mapped_lgl_grid",
    "mass_matrix",
    "oracle_ahat",
    "oracle_table",
    "ref_forward",
    "ref_inverse",
    "solve",
    "stiffness_matrix",
]
