"""Table of log-singular integrals and contractions against it.

The rectangle-triangle transform turns stiffness integrands into
polynomials divided by ``2 - xi - eta``, which vanishes only at the corner
(1, 1) of the square. The singularity is logarithmic, so the basic moments

    ahat[p, q] = int_Q L_p(xi) L_q(eta) / (2 - xi - eta)

are finite. They are built once by a recurrence and then any such integral
of polynomials reduces to a finite sum against the table.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .exceptions import AccuracyError, CoverageError
from .polyquad import (
    LegendreCoeffs2D,
    gauss_rule,
    legendre_product_coeffs,
    legendre_product_tensor,
    legendre_table,
)

FOUR_LN2 = 4.0 * math.log(2.0)


def beta_coeff(p: int) -> float:
    """``int_{-1}^{1} L_p(x) ln(2 / (1 - x)) dx`` in closed form."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    return 2.0 if p == 0 else 2.0 / (p * (p + 1))


def alpha_coeff(p: int, quad_points: int | None = None) -> float:
    """``int_{-1}^{1} L_p(x) ln((3 - x) / 2) dx`` by Gauss quadrature.

    After one integration by parts the integrand is ``L_{p+1} - L_{p-1}``
    over ``3 - x``, analytic on a large Bernstein ellipse, so the Gauss
    rule converges geometrically. ``quad_points`` defaults to p + 40.
    """
    if p < 0:
        raise ValueError("p must be nonnegative")
    rule = gauss_rule(quad_points or p + 40)
    x = rule.nodes
    lv = legendre_table(p + 1, x)
    # the antiderivative of L_0 vanishing at -1 is 1 + x = L_1 + L_0
    lower = -lv[0] if p == 0 else lv[p - 1]
    return float(rule.weights @ ((lv[p + 1] - lower) / (3.0 - x))) / (2 * p + 1)


@dataclass(frozen=True, eq=False)
class SingularTable:
    """Values ``ahat[p, q]`` for ``0 <= p, q <= 2 n_max``.

    Only entries with ``p + q <= 2 n_max`` are produced by the recurrence;
    the rest are NaN and ``defined`` is False there. The square block
    ``p, q <= n_max`` is always complete.
    """

    n_max: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.values)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def covers(self, degree: int) -> bool:
        """True if every ``ahat[p, q]`` with ``p, q <= degree`` is available."""
        return degree <= self.n_max

    def block(self, degree: int) -> np.ndarray:
        """The complete square sub-table ``p, q <= degree``."""
        if not self.covers(degree):
            raise CoverageError(
                f"table with n_max={self.n_max} does not cover degree {degree}; "
                f"need n_max >= {degree}"
            )
        return np.asarray(self.values[: degree + 1, : degree + 1])


def build_table(n_max: int) -> SingularTable:
    """March the recurrence for ``ahat`` over the band ``p + q <= 2 n_max``.

    Row q = 0 comes from alpha + beta, row q = 1 from the three-term
    relation, and rows q >= 2 from

        ahat[p, q] = ahat[p, q-2] + (2q-1)/(2p+1) (ahat[p+1, q-1] - ahat[p-1, q-1])

    for ``q <= p <= 2 n_max - q``. The upper triangle is filled by symmetry.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    top = 2 * n_max
    a = np.full((top + 1, top + 1), np.nan)
    for p in range(top + 1):
        a[p, 0] = alpha_coeff(p) + beta_coeff(p)
    for p in range(1, top):
        a[p, 1] = 2 * a[p, 0] - ((p + 1) * a[p + 1, 0] + p * a[p - 1, 0]) / (2 * p + 1)
    for q in range(2, n_max + 1):
        for p in range(q, top - q + 1):
            a[p, q] = a[p, q - 2] + (2 * q - 1) / (2 * p + 1) * (a[p + 1, q - 1] - a[p - 1, q - 1])
    lower = np.tril(~np.isnan(a), -1)
    a.T[lower] = a[lower]
    return SingularTable(n_max, a)


@functools.lru_cache(maxsize=8)
def cached_table(n_max: int) -> SingularTable:
    return build_table(n_max)


def required_n_max(degree_u: int, degree_v: int) -> int:
    """Smallest table size whose band holds products of the two degrees."""
    return degree_u + degree_v


def singular_inner(d_u: LegendreCoeffs2D, d_v: LegendreCoeffs2D, table: SingularTable) -> float:
    """``int_Q U V / (2 - xi - eta)`` for two tensor Legendre series.

    The product is linearised with the Legendre product coefficients and
    contracted with the table.
    """
    u = np.asarray(d_u.coeffs)
    v = np.asarray(d_v.coeffs)
    nu, nv = d_u.degree, d_v.degree
    top = nu + nv
    # e[p, q] = sum c^{i i'}_p c^{j j'}_q u[i, j] v[i', j']
    c = np.zeros((nu + 1, nv + 1, top + 1))
    for i in range(nu + 1):
        for k in range(nv + 1):
            c[i, k, : i + k + 1] = legendre_product_coeffs(i, k)
    e = np.einsum("ikp,jlq,ij,kl->pq", c, c, u, v, optimize=True)
    p, q = np.nonzero(e)
    if p.size == 0:
        return 0.0
    if p.max() >= table.size or q.max() >= table.size or not table.defined[p, q].all():
        need = int(math.ceil(max(p.max(), q.max(), (p + q).max() / 2)))
        raise CoverageError(f"singular table n_max={table.n_max} too small; need n_max >= {need}")
    return float(np.sum(e[p, q] * table.values[p, q]))


def singular_gram(n: int, table: SingularTable) -> np.ndarray:
    """Gram matrix of ``L_i(xi) L_j(eta)`` under the weight ``1/(2 - xi - eta)``.

    Returns G of shape ((n+1)^2, (n+1)^2) with row index ``i*(n+1) + j``, so
    that ``u.ravel() @ G @ v.ravel()`` equals :func:`singular_inner` of the
    coefficient arrays u and v. Needs ``table.n_max >= 2n``.
    """
    ahat = table.block(2 * n)
    c = legendre_product_tensor(n)  # (i, i', p)
    m = n + 1
    w = c.reshape(m * m, -1) @ ahat  # (i i', q)
    g = w @ c.reshape(m * m, -1).T  # (i i', j j')
    g = g.reshape(m, m, m, m).transpose(0, 2, 1, 3).reshape(m * m, m * m)
    return 0.5 * (g + g.T)


# Independent reference values.


def _mp_legendre_all(n: int, x):
    out = [mpmath.mpf(1), x]
    for k in range(1, n):
        out.append(((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1))
    return out[: n + 1]


@functools.lru_cache(maxsize=None)
def _mp_gauss(m: int, dps: int):
    """Gauss-Legendre nodes/weights refined to ``dps`` digits by Newton."""
    rule = gauss_rule(m)
    nodes, weights = [], []
    with mpmath.workdps(dps):
        for x0 in rule.nodes:
            x = mpmath.mpf(float(x0))
            for _ in range(8):
                lv = _mp_legendre_all(m, x)
                d = m * (x * lv[m] - lv[m - 1]) / (x * x - 1)
                dx = lv[m] / d
                x -= dx
                if abs(dx) < mpmath.mpf(10) ** (-dps):
                    break
            lv = _mp_legendre_all(m, x)
            d = m * (x * lv[m] - lv[m - 1]) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * d * d))
    return nodes, weights


def oracle_table(size: int, tol: float = 1e-11, max_levels: int = 60, dps: int | None = None) -> np.ndarray:
    """Reference ``ahat[p, q]`` for ``p, q <= size`` from a 1D representation.

    For ``p >= q``,

        ahat[p, q] = int_{-1}^{1} ln((3 - x)/(1 - x)) L_q(2 - x) L_p(x) dx,

    with the logarithm split as ln((3-x)/2) + ln(2/(1-x)). The analytic
    piece uses one Gauss rule; the log-singular piece uses dyadic cells
    [1 - 2h, 1 - h] toward x = 1, each with its own Gauss rule, until the
    neglected tail is below ``tol``. ``L_q(2 - x)`` grows like 5.8^q on the
    interval, so the sums run in extended precision.
    """
    dps = dps or 30 + int(size * 0.8)
    m = size + 30
    with mpmath.workdps(dps):
        nodes, weights = _mp_gauss(m, dps)
        one, two, three = mpmath.mpf(1), mpmath.mpf(2), mpmath.mpf(3)
        acc = [[mpmath.mpf(0)] * (size + 1) for _ in range(size + 1)]

        def add(a, b, logfun):
            half, mid = (b - a) / 2, (b + a) / 2
            for t, w in zip(nodes, weights):
                x = mid + half * t
                wl = w * half * logfun(x)
                lp = _mp_legendre_all(size, x)
                lq = _mp_legendre_all(size, 2 - x)
                for p in range(size + 1):
                    s = wl * lp[p]
                    row = acc[p]
                    for q in range(p + 1):
                        row[q] += s * lq[q]

        add(-one, one, lambda x: mpmath.log((three - x) / two))
        add(-one, mpmath.mpf(0), lambda x: mpmath.log(two / (one - x)))
        h = mpmath.mpf(1)
        for _ in range(max_levels):
            h /= 2
            add(one - 2 * h, one - h, lambda x: mpmath.log(two / (one - x)))
            # on the last cell the polynomial factor is ~ L_q(1) L_p(1) = 1
            tail = h * (mpmath.log(two / h) + 1) * 2
            if tail < tol:
                break
        else:
            raise AccuracyError("dyadic refinement did not reach tolerance")
        out = np.empty((size + 1, size + 1))
        for p in range(size + 1):
            for q in range(p + 1):
                out[p, q] = out[q, p] = float(acc[p][q])
    return out


def oracle_ahat(p: int, q: int, tol: float = 1e-11) -> float:
    """Reference value of a single ``ahat[p, q]``; see :func:`oracle_table`."""
    return float(oracle_table(max(p, q), tol)[p, q])
