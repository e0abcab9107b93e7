"""One-dimensional Legendre machinery: evaluation, quadrature, transforms.

Everything here works on the interval [-1, 1] and evaluates polynomials
with upward three-term recurrences.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, DimensionError

_NEWTON_MAXITER = 100


def legendre_table(n: int, x) -> np.ndarray:
    """Return ``L_0(x), ..., L_n(x)`` stacked along a new leading axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = x
    for k in range(1, n):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def legendre_table_deriv(n: int, x) -> tuple[np.ndarray, np.ndarray]:
    """Values and first derivatives of ``L_0..L_n`` at ``x``.

    Derivatives use ``L'_{k+1} = L'_{k-1} + (2k+1) L_k`` which stays finite
    at the endpoints.
    """
    vals = legendre_table(n, x)
    der = np.zeros_like(vals)
    if n >= 1:
        der[1] = 1.0
    for k in range(1, n):
        der[k + 1] = der[k - 1] + (2 * k + 1) * vals[k]
    return vals, der


def legendre_eval(k: int, x):
    """Legendre polynomial ``L_k`` at ``x`` (scalar or array)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    p0, p1 = np.ones_like(x), x
    if k == 0:
        return p0[()]
    for j in range(1, k):
        p0, p1 = p1, ((2 * j + 1) * x * p1 - j * p0) / (j + 1)
    return p1[()]


def jacobi11_eval(k: int, x):
    """Jacobi polynomial ``J_k^{1,1}`` (standard normalisation, ``J_1 = 2x``)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    p0, p1 = np.ones_like(x), 2.0 * x
    if k == 0:
        return p0[()]
    for n in range(2, k + 1):
        # n(n+2) J_n = (2n+1)(n+1) x J_{n-1} - n(n+1) J_{n-2}
        p0, p1 = p1, ((2 * n + 1) * (n + 1) * x * p1 - n * (n + 1) * p0) / (n * (n + 2))
    return p1[()]


class RuleKind(enum.Enum):
    GAUSS_LEGENDRE = "gauss"
    GAUSS_LOBATTO = "lobatto"


@dataclass(frozen=True, eq=False)
class QuadRule1D:
    """Nodes (ascending) and weights of a rule on [-1, 1].

    ``order`` is N for a Lobatto rule with N+1 nodes and M for a Gauss rule
    with M nodes.
    """

    kind: RuleKind
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def exactness(self) -> int:
        """Highest polynomial degree integrated exactly (2N-1 for both kinds)."""
        return 2 * self.order - 1

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def _newton(x, step, what):
    for _ in range(_NEWTON_MAXITER):
        dx = step(x)
        x = x - dx
        if np.max(np.abs(dx), initial=0.0) < 1e-15:
            return x - step(x)
    raise ConvergenceError(f"Newton iteration for {what} did not converge")


@functools.lru_cache(maxsize=None)
def gauss_rule(m: int) -> QuadRule1D:
    """M-point Gauss-Legendre rule (zeros of ``L_M``)."""
    if m < 1:
        raise ValueError("Gauss rule needs at least one point")
    i = np.arange(m)
    x0 = -np.cos(np.pi * (i + 0.75) / (m + 0.5))

    def step(x):
        v, d = legendre_table_deriv(m, x)
        return v[m] / d[m]

    x = _newton(x0, step, f"Gauss nodes (M={m})")
    x = 0.5 * (x - x[::-1])  # exact symmetry
    _, d = legendre_table_deriv(m, x)
    w = 2.0 / ((1.0 - x * x) * d[m] ** 2)
    return QuadRule1D(RuleKind.GAUSS_LEGENDRE, m, x, w)


@functools.lru_cache(maxsize=None)
def lgl_rule(n: int) -> QuadRule1D:
    """Legendre-Gauss-Lobatto rule with N+1 nodes, the zeros of ``(1-x^2) L'_N``."""
    if n < 1:
        raise ValueError("Lobatto rule needs N >= 1")
    x = np.empty(n + 1)
    x[0], x[-1] = -1.0, 1.0
    if n > 1:
        x0 = -np.cos(np.pi * np.arange(1, n) / n)

        def step(t):
            # Newton on L'_N, with L''_N from the Legendre equation
            v, d = legendre_table_deriv(n, t)
            return (1.0 - t * t) * d[n] / (2.0 * t * d[n] - n * (n + 1) * v[n])

        inner = _newton(x0, step, f"LGL nodes (N={n})")
        x[1:-1] = 0.5 * (inner - inner[::-1])
    ln = legendre_eval(n, x)
    w = 2.0 / (n * (n + 1) * ln**2)
    return QuadRule1D(RuleKind.GAUSS_LOBATTO, n, x, w)


@functools.lru_cache(maxsize=None)
def _product_coeffs_cached(m: int, n: int) -> np.ndarray:
    top = m + n
    rule = gauss_rule(top + 1)
    lv = legendre_table(top, rule.nodes)
    integrand = rule.weights * lv[m] * lv[n]
    c = (2 * np.arange(top + 1) + 1) / 2.0 * (lv @ integrand)
    p = np.arange(top + 1)
    c[((p - top) % 2 != 0) | (p < abs(m - n))] = 0.0
    c.setflags(write=False)
    return c


def legendre_product_coeffs(m: int, n: int) -> np.ndarray:
    """Coefficients ``c[p]`` with ``L_m L_n = sum_p c[p] L_p``, ``p = 0..m+n``.

    Computed from the projections ``(2p+1)/2 * int L_m L_n L_p`` on an
    (m+n+1)-point Gauss rule, which is exact for this degree.
    """
    if m < 0 or n < 0:
        raise ValueError("degrees must be nonnegative")
    if m > n:
        m, n = n, m
    return _product_coeffs_cached(m, n)


@functools.lru_cache(maxsize=None)
def legendre_product_tensor(n: int) -> np.ndarray:
    """``C[i, j, p]`` = coefficient of ``L_p`` in ``L_i L_j`` for ``i, j <= n``.

    Batched form of :func:`legendre_product_coeffs` using one (2n+1)-point
    Gauss rule for all pairs.
    """
    rule = gauss_rule(2 * n + 1)
    lv = legendre_table(2 * n, rule.nodes)
    scale = (2 * np.arange(2 * n + 1) + 1) / 2.0
    c = np.einsum("ik,jk,pk,k->ijp", lv[: n + 1], lv[: n + 1], lv, rule.weights)
    c *= scale
    i, j, p = np.ogrid[: n + 1, : n + 1, : 2 * n + 1]
    c[((p - i - j) % 2 != 0) | (p < np.abs(i - j)) | (p > i + j)] = 0.0
    c.setflags(write=False)
    return c


@dataclass(frozen=True, eq=False)
class LegendreCoeffs2D:
    """Coefficients of ``sum_pq coeffs[p, q] L_p(xi) L_q(eta)``."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        shape = (self.degree + 1, self.degree + 1)
        if np.shape(self.coeffs) != shape:
            raise DimensionError(f"coefficient array must be {shape}, got {np.shape(self.coeffs)}")

    def __call__(self, xi, eta):
        return legendre_eval_2d(self.coeffs, xi, eta)


def legendre_transform_matrix(degree: int, rule: QuadRule1D) -> np.ndarray:
    """Matrix taking values at the rule nodes to Legendre coefficients 0..degree."""
    lv = legendre_table(degree, rule.nodes)
    scale = (2 * np.arange(degree + 1) + 1) / 2.0
    return scale[:, None] * lv * rule.weights


def legendre_transform_2d(values, degree: int) -> LegendreCoeffs2D:
    """Forward Legendre transform of values on an M x M Gauss-Legendre grid.

    ``values[a, b]`` is f at ``(xi_a, eta_b)``. The projection is exact when
    f has degree <= ``degree`` in each variable and M >= degree + 1.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DimensionError("values must be a square grid")
    m = values.shape[0]
    if m < degree + 1:
        raise DimensionError(f"grid of {m} points cannot resolve degree {degree}")
    t = legendre_transform_matrix(degree, gauss_rule(m))
    return LegendreCoeffs2D(degree, t @ values @ t.T)


def legendre_eval_2d(coeffs, xi, eta):
    """Evaluate a tensor Legendre series at matching arrays of points."""
    coeffs = np.asarray(coeffs, dtype=float)
    xi, eta = np.broadcast_arrays(np.asarray(xi, float), np.asarray(eta, float))
    lx = legendre_table(coeffs.shape[0] - 1, xi)
    ly = legendre_table(coeffs.shape[1] - 1, eta)
    return np.einsum("pq,p...,q...->...", coeffs, lx, ly)[()]
