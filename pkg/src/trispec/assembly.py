"""Mass, stiffness, load and boundary terms on a single triangle.

Everything is pulled back to the square. The mass integrand carries the
polynomial weight ``F chi / 8`` and is integrated exactly by Gauss rules.
The stiffness integrand carries ``1 / chi``; it is handled exactly by
expanding the derivative combinations in Legendre series and contracting
with the singular table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basis import Basis, BasisKind, grad_coeff_matrices, interpolate
from .exceptions import DimensionError
from .mapping import TriangleMap, general_forward
from .polyquad import gauss_rule, lgl_rule
from .singular import SingularTable, cached_table, singular_gram


def _tri(tri):
    return TriangleMap.reference() if tri is None else tri


def _as_basis(n, kind) -> Basis:
    return n if isinstance(n, Basis) else Basis(BasisKind(kind), n)


def mass_matrix(n, tri: TriangleMap | None = None, kind=BasisKind.MODAL) -> np.ndarray:
    """``(u, v)_T`` for all basis pairs.

    The weight ``chi = (1-xi)/2 + (1-eta)/2`` splits into two tensor terms,
    so the matrix is a sum of two Kronecker products of 1D matrices built
    with an (N+2)-point Gauss rule (exact for degree 2N+1).
    """
    basis = _as_basis(n, kind)
    tri = _tri(tri)
    rule = gauss_rule(basis.n + 2)
    v = basis.values_1d(rule.nodes)
    m0 = v.T @ (rule.weights[:, None] * v)
    m1 = v.T @ ((rule.weights * (1 - rule.nodes) / 2)[:, None] * v)
    mass = tri.F / 8 * (np.kron(m1, m0) + np.kron(m0, m1))
    return 0.5 * (mass + mass.T)


def stiffness_matrix(
    n, tri: TriangleMap | None = None, kind=BasisKind.MODAL, table: SingularTable | None = None
) -> np.ndarray:
    """``(grad u, grad v)_T`` for all basis pairs.

    With ``D = (d_xi + d_eta) u`` and ``R = ((1-xi) d_xi - (1-eta) d_eta) u``,

        (grad u, grad v) = int_Q (A D_u D_v + C R_u R_v - B (D_u R_v + R_u D_v)) / chi.

    D and R are in Q_N; the weighted products are evaluated with the Gram
    matrix of the Legendre tensor basis under ``1/(2 - xi - eta)``, which
    needs a table with ``n_max >= 2N``.
    """
    basis = _as_basis(n, kind)
    tri = _tri(tri)
    table = table or cached_table(2 * basis.n)
    g = 2.0 * singular_gram(basis.n, table)  # 1/chi = 2/(2 - xi - eta)
    div, tan = grad_coeff_matrices(basis)
    dg = div @ g
    cross = dg @ tan.T
    s = tri.A * (dg @ div.T) + tri.C * (tan @ g @ tan.T) - tri.B * (cross + cross.T)
    return 0.5 * (s + s.T)


def discrete_inner(u_vals, v_vals, n: int, tri: TriangleMap | None = None) -> float:
    """LGL-based discrete inner product of two value grids (N+1, N+1).

    Exact whenever the product lies in Y_{2N-2}.
    """
    tri = _tri(tri)
    u = np.asarray(u_vals, dtype=float)
    v = np.asarray(v_vals, dtype=float)
    shape = (n + 1, n + 1)
    if u.shape != shape or v.shape != shape:
        raise DimensionError(f"value grids must have shape {shape}")
    return float(np.sum(u * v * _lgl_weight_grid(n, tri)))


def _lgl_weight_grid(n: int, tri: TriangleMap) -> np.ndarray:
    rule = lgl_rule(n)
    z, w = rule.nodes, rule.weights
    chi = (2 - z[:, None] - z[None, :]) / 2
    return tri.F / 8 * chi * np.outer(w, w)


def load_vector(
    f: Callable, n, tri: TriangleMap | None = None, kind=BasisKind.MODAL, method: str = "interpolant"
) -> np.ndarray:
    """Inner products of f with every basis function.

    f is only sampled at the mapped LGL points. ``method="interpolant"``
    integrates its interpolant I_N f against each basis function exactly
    with the mass matrix; ``method="lgl"`` applies the LGL discrete inner
    product instead. The two differ by a quadrature error that decays
    spectrally; the first reproduces members of Y_N exactly.
    """
    basis = _as_basis(n, kind)
    tri = _tri(tri)
    fv = interpolate(f, basis.n, tri)
    if method == "interpolant":
        return mass_matrix(basis, tri) @ (basis.nodal_to_self @ fv.ravel())
    if method != "lgl":
        raise ValueError(f"unknown load method {method!r}")
    weighted = fv * _lgl_weight_grid(basis.n, tri)
    vl = basis.values_1d(basis.rule.nodes)
    return (vl.T @ weighted @ vl).ravel()


def boundary_vector(g: Callable, n, tri: TriangleMap | None = None, kind=BasisKind.MODAL) -> np.ndarray:
    """Neumann contributions ``<g, v>`` on the edge opposite V1.

    That edge is the image of the two square edges eta = 1 and xi = 1, each
    traversed at constant speed ``|V2 - V3| / 4``; both halves are summed
    with the LGL rule.
    """
    basis = _as_basis(n, kind)
    tri = _tri(tri)
    rule = basis.rule
    z, w = rule.nodes, rule.weights
    (x2, y2), (x3, y3) = tri.vertices[1], tri.vertices[2]
    speed = math.hypot(x2 - x3, y2 - y3) / 4
    one = np.ones_like(z)
    g_top = np.broadcast_to(np.asarray(g(*general_forward(tri, z, one)), float), z.shape)
    g_right = np.broadcast_to(np.asarray(g(*general_forward(tri, one, z)), float), z.shape)
    vz = basis.values_1d(z)
    v1 = basis.values_1d([1.0])[0]
    # eta = 1: psi_kl(z_j, 1) = phi_k(z_j) phi_l(1);  xi = 1: phi_k(1) phi_l(z_j)
    top = np.outer(vz.T @ (w * g_top), v1)
    right = np.outer(v1, vz.T @ (w * g_right))
    return (speed * (top + right)).ravel()


@dataclass
class AssembledSystem:
    """Galerkin matrices and vectors of one element, before Dirichlet reduction."""

    n: int
    basis: Basis
    mass: np.ndarray
    stiffness: np.ndarray
    load: np.ndarray
    boundary: np.ndarray
    dirichlet_mask: np.ndarray
    gamma: float = 0.0
    tri: TriangleMap | None = None

    @property
    def matrix(self) -> np.ndarray:
        return self.stiffness + self.gamma * self.mass

    @property
    def rhs(self) -> np.ndarray:
        return self.load + self.boundary

    @property
    def free(self) -> np.ndarray:
        return ~self.dirichlet_mask

    def reduced(self) -> tuple[np.ndarray, np.ndarray]:
        keep = self.free
        return self.matrix[np.ix_(keep, keep)], self.rhs[keep]
