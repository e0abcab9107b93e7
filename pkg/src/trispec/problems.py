"""Model problems on the reference triangle with known solutions.

Each problem is ``-lap u + gamma u = f`` with ``u = 0`` on the legs x = 0,
y = 0 and ``du/dnu = g`` on the hypotenuse, where ``nu = (1, 1)/sqrt 2``.
Sources and Neumann data are closed-form derivatives of the exact solution.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import WellPosednessError

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class Problem:
    gamma: float
    f: Callable
    g: Callable
    exact: Optional[Callable] = None
    grad: Optional[Callable] = None
    name: str = "custom"

    def __post_init__(self):
        if self.gamma < 0:
            raise WellPosednessError("reaction coefficient gamma must be nonnegative")


# Example 1: u = exp(x + y - 1) sin(phi), phi = 3xy (y - sqrt3 x / 2 + sqrt3 / 4)


def _phi1(x, y):
    phi = 3 * x * y * (y - SQRT3 * x / 2 + SQRT3 / 4)
    phi_x = 3 * y**2 - 3 * SQRT3 * x * y + 0.75 * SQRT3 * y
    phi_y = 6 * x * y - 1.5 * SQRT3 * x**2 + 0.75 * SQRT3 * x
    lap = 6 * x - 3 * SQRT3 * y
    return phi, phi_x, phi_y, lap


def example1_exact(x, y):
    phi = _phi1(x, y)[0]
    return np.exp(x + y - 1) * np.sin(phi)


def example1_grad(x, y):
    phi, px, py, _ = _phi1(x, y)
    e, s, c = np.exp(x + y - 1), np.sin(phi), np.cos(phi)
    return e * (s + c * px), e * (s + c * py)


def example1_laplacian(x, y):
    phi, px, py, lap = _phi1(x, y)
    e, s, c = np.exp(x + y - 1), np.sin(phi), np.cos(phi)
    # u = e^s w with s_x = s_y = 1:  lap u = e^s (2 w + 2 (w_x + w_y) + lap w)
    return e * (2 * s + 2 * c * (px + py) + c * lap - s * (px**2 + py**2))


# Example 2: u = (1 - x - y)^{5/2} (exp(xy) - 1); only H^{3-eps} near the hypotenuse


def _w(x, y):
    return np.maximum(1 - x - y, 0.0)


def example2_exact(x, y):
    return _w(x, y) ** 2.5 * np.expm1(x * y)


def example2_grad(x, y):
    w, e = _w(x, y), np.exp(x * y)
    base = -2.5 * w**1.5 * (e - 1)
    return base + w**2.5 * y * e, base + w**2.5 * x * e


def example2_laplacian(x, y):
    w, e = _w(x, y), np.exp(x * y)
    return 7.5 * np.sqrt(w) * (e - 1) - 5 * w**1.5 * (x + y) * e + w**2.5 * (x * x + y * y) * e


def _normal_derivative(grad):
    def g(x, y):
        gx, gy = grad(x, y)
        return (gx + gy) / SQRT2

    return g


def _source(lap, exact, gamma):
    def f(x, y):
        return -lap(x, y) + gamma * exact(x, y)

    return f


def example1(gamma: float = 1.0) -> Problem:
    return Problem(
        gamma,
        _source(example1_laplacian, example1_exact, gamma),
        _normal_derivative(example1_grad),
        example1_exact,
        example1_grad,
        "example1",
    )


def example2(gamma: float = 1.0) -> Problem:
    return Problem(
        gamma,
        _source(example2_laplacian, example2_exact, gamma),
        _normal_derivative(example2_grad),
        example2_exact,
        example2_grad,
        "example2",
    )


def manufactured_xy(gamma: float = 1.0) -> Problem:
    """u = xy, representable exactly in Y_2."""
    return Problem(
        gamma,
        lambda x, y: gamma * x * y,
        lambda x, y: (x + y) / SQRT2,
        lambda x, y: x * y,
        lambda x, y: (y, x),
        "manufactured-xy",
    )


PROBLEMS = {
    "example1": example1,
    "example2": example2,
    "manufactured-xy": manufactured_xy,
}
