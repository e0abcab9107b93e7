"""Rectangle-triangle transform between Q = [-1,1]^2 and triangles.

The reference triangle is T = {x, y >= 0, x + y <= 1}. The transform sends
the corners (-1,-1), (1,-1), (-1,1) of Q to the vertices of T and the corner
(1,1) to the hypotenuse midpoint (1/2, 1/2), so the edges xi = 1 and eta = 1
together cover the hypotenuse. Unlike the collapsed (Duffy) coordinates it
is one-to-one on the closed square.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DegenerateTriangleError, DomainError
from .polyquad import lgl_rule

DOMAIN_TOL = 1e-12
_RADICAND_CLAMP = -1e-14


def _check_square(xi, eta):
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(np.abs(xi) > 1 + DOMAIN_TOL) or np.any(np.abs(eta) > 1 + DOMAIN_TOL):
        raise DomainError("point outside the reference square [-1,1]^2")
    return xi, eta


def _check_triangle(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < -DOMAIN_TOL) or np.any(y < -DOMAIN_TOL) or np.any(x + y > 1 + DOMAIN_TOL):
        raise DomainError("point outside the reference triangle")
    return x, y


def ref_forward(xi, eta):
    """Map (xi, eta) in Q to (x, y) in the reference triangle."""
    xi, eta = _check_square(xi, eta)
    x = (1 + xi) * (3 - eta) / 8
    y = (3 - xi) * (1 + eta) / 8
    return x[()], y[()]


def chi_xy(x, y):
    """``sqrt((x-y)^2 + 4(1-x-y))``, the triangle-side form of chi."""
    rad = (x - y) ** 2 + 4 * (1 - x - y)
    if np.any(rad < _RADICAND_CLAMP):
        raise DomainError("point beyond the hypotenuse")
    return np.sqrt(np.maximum(rad, 0.0))


def ref_inverse(x, y):
    """Map (x, y) in the reference triangle back to (xi, eta) in Q."""
    x, y = _check_triangle(x, y)
    root = chi_xy(x, y)
    xi = 1 + (x - y) - root
    eta = 1 - (x - y) - root
    return np.clip(xi, -1.0, 1.0)[()], np.clip(eta, -1.0, 1.0)[()]


def chi(xi, eta):
    """``(2 - xi - eta) / 2``; equals 8 times the Jacobian."""
    return (2 - np.asarray(xi, dtype=float) - np.asarray(eta, dtype=float)) / 2


def jacobian(xi, eta):
    """Jacobian determinant ``(2 - xi - eta) / 16`` of :func:`ref_forward`."""
    xi, eta = _check_square(xi, eta)
    return ((2 - xi - eta) / 16)[()]


def duffy_forward(xi, eta):
    """Collapsed-coordinate map; the whole edge eta = 1 lands on (0, 1)."""
    xi, eta = _check_square(xi, eta)
    return ((1 + xi) * (1 - eta) / 4)[()], ((1 + eta) / 2)[()]


# Factorisation of the transform through the symmetric map (s, p) = (a+b, ab).


def square_shift(xi, eta):
    """Affine map of Q onto (-1, 0) x (0, 1)."""
    return (np.asarray(xi) - 1) / 2, (1 - np.asarray(eta)) / 2


def symmetric_map(a, b):
    return a + b, a * b


def symmetric_to_triangle(s, p):
    """Affine map of {|s| < 1 + p < 1} onto the reference triangle."""
    return (p + s + 1) / 2, (p - s + 1) / 2


def composite_forward(xi, eta):
    """:func:`ref_forward` rebuilt as shift, symmetric map, then affine map."""
    return symmetric_to_triangle(*symmetric_map(*square_shift(xi, eta)))


def tri_constants(vertices) -> tuple[float, float, float, float]:
    """Geometry constants (F, A, B, C) of a counterclockwise triangle.

    F is twice the signed area; A, B, C weight the three stiffness integrals
    on the square.
    """
    (x1, y1), (x2, y2), (x3, y3) = np.asarray(vertices, dtype=float)
    F = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    scale = max(np.ptp([x1, x2, x3]), np.ptp([y1, y2, y3]), 1e-300)
    if abs(F) < 1e-14 * scale**2:
        raise DegenerateTriangleError("triangle vertices are collinear")
    if F < 0:
        raise DegenerateTriangleError("triangle must be oriented counterclockwise")
    A = ((x2 - x3) ** 2 + (y2 - y3) ** 2) / (2 * F)
    B = ((x2 - x1) ** 2 + (y2 - y1) ** 2 - (x3 - x1) ** 2 - (y3 - y1) ** 2) / (4 * F)
    C = ((2 * x1 - x2 - x3) ** 2 + (2 * y1 - y2 - y3) ** 2) / (8 * F)
    return float(F), float(A), float(B), float(C)


@dataclass(frozen=True)
class TriangleMap:
    """A counterclockwise triangle V1, V2, V3 and its map from Q.

    V1 is the image of (-1,-1), V2 of (1,-1) and V3 of (-1,1).
    """

    vertices: tuple

    def __post_init__(self):
        verts = tuple(tuple(float(c) for c in v) for v in self.vertices)
        if len(verts) != 3 or any(len(v) != 2 for v in verts):
            raise ValueError("a triangle needs three 2D vertices")
        object.__setattr__(self, "vertices", verts)
        tri_constants(verts)

    @classmethod
    def reference(cls) -> "TriangleMap":
        return cls(((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)))

    @cached_property
    def constants(self):
        return tri_constants(self.vertices)

    @property
    def F(self) -> float:
        return self.constants[0]

    @property
    def A(self) -> float:
        return self.constants[1]

    @property
    def B(self) -> float:
        return self.constants[2]

    @property
    def C(self) -> float:
        return self.constants[3]

    @property
    def area(self) -> float:
        return self.F / 2

    @cached_property
    def _affine(self):
        v = np.asarray(self.vertices)
        return v[0], np.column_stack([v[1] - v[0], v[2] - v[0]])

    def to_reference(self, x, y):
        """Affine pull-back of global (x, y) to the reference triangle."""
        origin, m = self._affine
        x = np.asarray(x, dtype=float) - origin[0]
        y = np.asarray(y, dtype=float) - origin[1]
        det = self.F
        xr = (m[1, 1] * x - m[0, 1] * y) / det
        yr = (-m[1, 0] * x + m[0, 0] * y) / det
        return xr, yr

    def from_reference(self, xr, yr):
        origin, m = self._affine
        xr = np.asarray(xr, dtype=float)
        yr = np.asarray(yr, dtype=float)
        return origin[0] + m[0, 0] * xr + m[0, 1] * yr, origin[1] + m[1, 0] * xr + m[1, 1] * yr

    def forward(self, xi, eta):
        return general_forward(self, xi, eta)

    def inverse(self, x, y):
        return general_inverse(self, x, y)


def general_forward(tri: TriangleMap, xi, eta):
    """Map (xi, eta) in Q onto the triangle ``tri``."""
    xi, eta = _check_square(xi, eta)
    w1 = (1 - xi) * (1 - eta) / 4
    w2 = (1 + xi) * (3 - eta) / 8
    w3 = (3 - xi) * (1 + eta) / 8
    (x1, y1), (x2, y2), (x3, y3) = tri.vertices
    return (x1 * w1 + x2 * w2 + x3 * w3)[()], (y1 * w1 + y2 * w2 + y3 * w3)[()]


def general_inverse(tri: TriangleMap, x, y):
    """Inverse of :func:`general_forward`, through the reference triangle."""
    xr, yr = tri.to_reference(x, y)
    return ref_inverse(xr, yr)


class GridKind(enum.Enum):
    NEWMAP = "newmap"
    DUFFY = "duffy"


def mapped_lgl_grid(n: int, kind=GridKind.NEWMAP, tri: TriangleMap | None = None) -> np.ndarray:
    """Images of the (N+1)^2 tensor LGL points, shape ((N+1)^2, 2).

    Points are ordered with the xi index outer and the eta index inner.
    """
    kind = GridKind(kind)
    z = lgl_rule(n).nodes
    xi, eta = np.meshgrid(z, z, indexing="ij")
    if kind is GridKind.NEWMAP:
        x, y = ref_forward(xi, eta)
    else:
        x, y = duffy_forward(xi, eta)
    if tri is not None:
        x, y = tri.from_reference(x, y)
    return np.column_stack([np.ravel(x), np.ravel(y)])
