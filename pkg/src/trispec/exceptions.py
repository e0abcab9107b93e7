"""Exception types raised by trispec."""


class TrispecError(Exception):
    """Base class for all library errors."""


class DomainError(TrispecError, ValueError):
    """A point lies outside the reference square or triangle."""


class DegenerateTriangleError(TrispecError, ValueError):
    """Triangle vertices are collinear or negatively oriented."""


class ConvergenceError(TrispecError, RuntimeError):
    """An iterative root finder did not converge."""


class DimensionError(TrispecError, ValueError):
    """Array shapes do not match the requested degree or grid."""


class CoverageError(TrispecError, ValueError):
    """A singular-integral table is too small for the requested contraction."""


class AccuracyError(TrispecError, RuntimeError):
    """An adaptive quadrature did not reach its tolerance."""


class FactorizationError(TrispecError, RuntimeError):
    """The reduced Galerkin matrix is not symmetric positive definite."""


class WellPosednessError(TrispecError, ValueError):
    """The boundary value problem has no unique solution."""
