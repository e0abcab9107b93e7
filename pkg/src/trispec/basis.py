"""Modal and nodal bases of Q_N on the square and their images on triangles.

Both bases are tensor products of a 1D basis of P_N, indexed row-major:
``(k, l) -> k * (N + 1) + l`` with k the xi index. Pulled back through the
rectangle-triangle transform they span Y_N(T), which contains P_N(T) and
also chi * P_{N-1}(T).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .mapping import TriangleMap, general_inverse, mapped_lgl_grid
from .polyquad import (
    LegendreCoeffs2D,
    QuadRule1D,
    gauss_rule,
    jacobi11_eval,
    legendre_eval,
    legendre_table,
    legendre_table_deriv,
    legendre_transform_2d,
    legendre_transform_matrix,
    lgl_rule,
)


class BasisKind(enum.Enum):
    MODAL = "modal"
    NODAL = "nodal"


class Geometry(enum.Enum):
    REFERENCE_XY = "reference_xy"  # chi * d/dx and chi * d/dy on the reference triangle
    GENERAL_OPS = "general_ops"  # (d_xi + d_eta) and ((1-xi) d_xi - (1-eta) d_eta)


def _check_index(k: int, n: int):
    if not 0 <= k <= n:
        raise IndexError(f"basis index {k} outside 0..{n}")


def modal_phi(k: int, n: int, z):
    """Boundary-adapted mode: two linear vertex modes plus bubbles."""
    _check_index(k, n)
    z = np.asarray(z, dtype=float)
    if k == 0:
        return ((1 - z) / 2)[()]
    if k == n:
        return ((1 + z) / 2)[()]
    return ((1 - z * z) / 4 * jacobi11_eval(k - 1, z))[()]


def modal_phi_deriv(k: int, n: int, z):
    _check_index(k, n)
    z = np.asarray(z, dtype=float)
    if k == 0:
        return np.full_like(z, -0.5)[()]
    if k == n:
        return np.full_like(z, 0.5)[()]
    return (-k / 2 * legendre_eval(k, z))[()]


def _discrete_legendre_norms(n: int) -> np.ndarray:
    gamma = 2.0 / (2 * np.arange(n + 1) + 1)
    gamma[n] = 2.0 / n
    return gamma


def nodal_h(j: int, rule: QuadRule1D, z):
    """Lagrange cardinal polynomial on the LGL nodes, ``h_j(z_k) = delta_jk``.

    Uses the discrete Legendre expansion
    ``h_j = w_j sum_n L_n(z_j) L_n / gamma_n``.
    """
    n = rule.order
    _check_index(j, n)
    coef = rule.weights[j] * legendre_table(n, rule.nodes[j]) / _discrete_legendre_norms(n)
    return np.tensordot(coef, legendre_table(n, z), axes=1)[()]


def nodal_h_deriv(j: int, rule: QuadRule1D, z):
    n = rule.order
    _check_index(j, n)
    coef = rule.weights[j] * legendre_table(n, rule.nodes[j]) / _discrete_legendre_norms(n)
    return np.tensordot(coef, legendre_table_deriv(n, z)[1], axes=1)[()]


class GradCoeffPair(NamedTuple):
    """Legendre expansions of two first-order derivative combinations."""

    first: LegendreCoeffs2D
    second: LegendreCoeffs2D


@dataclass(frozen=True)
class Basis:
    """Tensor basis of order N (dimension (N+1)^2)."""

    kind: BasisKind
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        if self.n < 1:
            raise ValueError("polynomial order must be at least 1")

    @property
    def size(self) -> int:
        return (self.n + 1) ** 2

    @property
    def rule(self) -> QuadRule1D:
        return lgl_rule(self.n)

    def index(self, k: int, l: int) -> int:
        _check_index(k, self.n)
        _check_index(l, self.n)
        return k * (self.n + 1) + l

    def phi(self, k: int, z):
        if self.kind is BasisKind.MODAL:
            return modal_phi(k, self.n, z)
        return nodal_h(k, self.rule, z)

    def dphi(self, k: int, z):
        if self.kind is BasisKind.MODAL:
            return modal_phi_deriv(k, self.n, z)
        return nodal_h_deriv(k, self.rule, z)

    def values_1d(self, z) -> np.ndarray:
        """Matrix ``V[a, k] = phi_k(z_a)``."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return np.column_stack([self.phi(k, z) for k in range(self.n + 1)])

    def derivs_1d(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return np.column_stack([self.dphi(k, z) for k in range(self.n + 1)])

    @cached_property
    def legendre_1d(self) -> np.ndarray:
        """Column k holds the Legendre coefficients of the k-th 1D function."""
        rule = gauss_rule(self.n + 1)
        return legendre_transform_matrix(self.n, rule) @ self.values_1d(rule.nodes)

    @cached_property
    def dirichlet_mask(self) -> np.ndarray:
        """True for functions that do not vanish on xi = -1 or eta = -1.

        Found from the 1D values at -1, so it holds for either kind.
        """
        at_minus_one = np.abs(self.values_1d([-1.0])[0]) > 1e-12
        return np.logical_or.outer(at_minus_one, at_minus_one).ravel()

    def to_legendre(self, coeffs) -> np.ndarray:
        """Tensor coefficients (N+1, N+1) in this basis to Legendre coefficients."""
        c = np.asarray(coeffs, dtype=float).reshape(self.n + 1, self.n + 1)
        return self.legendre_1d @ c @ self.legendre_1d.T

    def evaluate(self, coeffs, xi, eta):
        """Evaluate ``sum c[k, l] phi_k(xi) phi_l(eta)`` at matching points."""
        c = np.asarray(coeffs, dtype=float).reshape(self.n + 1, self.n + 1)
        xi, eta = np.broadcast_arrays(np.asarray(xi, float), np.asarray(eta, float))
        vx = self.values_1d(xi.ravel())
        vy = self.values_1d(eta.ravel())
        return np.einsum("ak,kl,al->a", vx, c, vy).reshape(xi.shape)[()]

    def evaluate_grid(self, coeffs, zx, zy) -> np.ndarray:
        """Values on the tensor grid ``zx x zy``."""
        c = np.asarray(coeffs, dtype=float).reshape(self.n + 1, self.n + 1)
        return self.values_1d(zx) @ c @ self.values_1d(zy).T

    @cached_property
    def nodal_to_self(self) -> np.ndarray:
        """Matrix taking LGL nodal values (flattened) to coefficients in this basis."""
        if self.kind is BasisKind.NODAL:
            return np.eye(self.size)
        v = self.values_1d(self.rule.nodes)
        vinv = np.linalg.inv(v)
        return np.kron(vinv, vinv)


def eval_basis_on_triangle(basis: Basis, index, tri: TriangleMap, x, y):
    """Value of the pulled-back basis function ``(k, l)`` at (x, y) in ``tri``."""
    k, l = index
    xi, eta = general_inverse(tri, x, y)
    return (basis.phi(k, xi) * basis.phi(l, eta))[()]


def _grad_values(basis: Basis, k: int, l: int, geometry: Geometry, xi, eta):
    dxi = basis.dphi(k, xi) * basis.phi(l, eta)
    deta = basis.phi(k, xi) * basis.dphi(l, eta)
    div = dxi + deta
    tan = (1 - xi) * dxi - (1 - eta) * deta
    if geometry is Geometry.GENERAL_OPS:
        return div, tan
    return 2 * div + tan, 2 * div - tan


def grad_coeffs(basis: Basis, index, geometry=Geometry.REFERENCE_XY) -> GradCoeffPair:
    """Legendre expansions of the derivatives of basis function ``index``.

    ``REFERENCE_XY`` gives chi * d/dx and chi * d/dy of the pulled-back
    function on the reference triangle; ``GENERAL_OPS`` gives the divergence
    form ``(d_xi + d_eta) u`` and ``((1 - xi) d_xi - (1 - eta) d_eta) u``.
    Both are in Q_N, so sampling on an (N+1)-point Gauss grid and
    transforming is exact.
    """
    geometry = Geometry(geometry)
    k, l = index
    _check_index(k, basis.n)
    _check_index(l, basis.n)
    z = gauss_rule(basis.n + 1).nodes
    xi, eta = np.meshgrid(z, z, indexing="ij")
    first, second = _grad_values(basis, k, l, geometry, xi, eta)
    return GradCoeffPair(
        legendre_transform_2d(first, basis.n), legendre_transform_2d(second, basis.n)
    )


def grad_coeff_matrices(basis: Basis) -> tuple[np.ndarray, np.ndarray]:
    """``GENERAL_OPS`` expansions of every basis function at once.

    Returns (div, tan), each of shape (size, (N+1)^2): row ``k*(N+1)+l``
    is the flattened Legendre coefficient array of that basis function.
    Same sampling-and-transform route as :func:`grad_coeffs`, done one
    direction at a time.
    """
    n = basis.n
    rule = gauss_rule(n + 1)
    t = legendre_transform_matrix(n, rule)
    z = rule.nodes
    a = t @ basis.values_1d(z)  # (p, k)
    da = t @ basis.derivs_1d(z)
    xa = t @ ((1 - z)[:, None] * basis.derivs_1d(z))
    m = n + 1
    div = np.einsum("pk,ql->klpq", da, a) + np.einsum("pk,ql->klpq", a, da)
    tan = np.einsum("pk,ql->klpq", xa, a) - np.einsum("pk,ql->klpq", a, xa)
    return div.reshape(m * m, m * m), tan.reshape(m * m, m * m)


def interpolate(f: Callable, n: int, tri: TriangleMap | None = None) -> np.ndarray:
    """Values of f at the mapped tensor LGL points, shape (N+1, N+1).

    These are exactly the nodal coefficients of the interpolant in Y_N.
    """
    pts = mapped_lgl_grid(n, "newmap", tri)
    vals = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    return np.broadcast_to(vals, (pts.shape[0],)).reshape(n + 1, n + 1).copy()
