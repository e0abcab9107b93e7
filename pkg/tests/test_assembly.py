import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trispec.assembly import (
    AssembledSystem,
    boundary_vector,
    discrete_inner,
    load_vector,
    mass_matrix,
    stiffness_matrix,
)
from trispec.basis import Basis, Geometry, grad_coeffs, interpolate
from trispec.exceptions import CoverageError, DimensionError
from trispec.mapping import TriangleMap, chi_xy, ref_inverse
from trispec.polyquad import gauss_rule
from trispec.singular import build_table, singular_inner

KINDS = ["modal", "nodal"]
SQRT2 = math.sqrt(2.0)


def coeffs_of(f, basis, tri=None):
    return basis.nodal_to_self @ interpolate(f, basis.n, tri).ravel()


def one(x, y):
    return np.ones_like(np.asarray(x, dtype=float))


def tri_quad(tri, f, m=12):
    """Collapsed-coordinate Gauss rule on a triangle; independent of the new map."""
    r = gauss_rule(m)
    s, t = np.meshgrid(r.nodes, r.nodes, indexing="ij")
    a = (1 + s) * (1 - t) / 4
    b = (1 + t) / 2
    w = np.outer(r.weights, r.weights) * (1 - t) / 8
    v = np.asarray(tri.vertices)
    x = v[0, 0] + (v[1, 0] - v[0, 0]) * a + (v[2, 0] - v[0, 0]) * b
    y = v[0, 1] + (v[1, 1] - v[0, 1]) * a + (v[2, 1] - v[0, 1]) * b
    return float(np.sum(w * f(x, y)) * tri.F)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 5])
def test_mass_moments(kind, n, ref_tri):
    b = Basis(kind, n)
    m = mass_matrix(b)
    c1 = coeffs_of(one, b)
    assert c1 @ m @ c1 == pytest.approx(0.5, abs=1e-14)
    assert coeffs_of(lambda x, y: x, b) @ m @ c1 == pytest.approx(1 / 6, abs=1e-14)
    assert coeffs_of(chi_xy, b) @ m @ c1 == pytest.approx(7 / 12, abs=1e-14)


@pytest.mark.parametrize("kind", KINDS)
def test_mass_spd(kind, skew_tri):
    m = mass_matrix(6, skew_tri, kind)
    assert np.allclose(m, m.T, rtol=1e-12, atol=0)
    assert np.linalg.eigvalsh(m).min() > 0
    c1 = coeffs_of(one, Basis(kind, 6), skew_tri)
    assert c1 @ m @ c1 == pytest.approx(skew_tri.area, abs=1e-14)


def test_modal_mass_sparsity():
    n = 10
    m = mass_matrix(n, kind="modal").reshape(n + 1, n + 1, n + 1, n + 1)  # (k, l, k', l')
    bubbles = np.arange(1, n)
    block = m[np.ix_(bubbles, bubbles, bubbles, bubbles)]
    far = np.abs(bubbles[:, None] - bubbles[None, :]) > 3
    assert far.any()
    # bubble modes decouple once |k - k'| > 3 (or |l - l'| > 3)
    assert np.abs(block.transpose(0, 2, 1, 3)[far]).max() < 1e-13
    assert np.abs(block.transpose(1, 3, 0, 2)[far]).max() < 1e-13
    # the two linear vertex modes (k = 0 and k = N) reach only bubbles 1..3
    for vertex in (0, n):
        assert np.abs(m[vertex, :, 4:n, :]).max() < 1e-13
        assert np.abs(m[vertex, :, 1:4, :]).max() > 1e-6


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 4])
def test_stiffness_linear_functions(kind, n, ref_tri, skew_tri):
    for tri in (ref_tri, skew_tri):
        b = Basis(kind, n)
        s = stiffness_matrix(b, tri)
        cx = coeffs_of(lambda x, y: x, b, tri)
        cy = coeffs_of(lambda x, y: y, b, tri)
        area = tri.area
        assert cx @ s @ cx == pytest.approx(area, abs=1e-12)
        assert cx @ s @ cy == pytest.approx(0.0, abs=1e-12)
        assert (cx + cy) @ s @ (cx + cy) == pytest.approx(2 * area, abs=1e-12)


@pytest.mark.parametrize("kind", KINDS)
def test_stiffness_null_space(kind):
    b = Basis(kind, 5)
    s = stiffness_matrix(b)
    assert np.allclose(s, s.T, rtol=1e-12, atol=1e-14)
    ev = np.linalg.eigvalsh(s)
    assert abs(ev[0]) < 1e-10 and ev[1] > 1e-6
    assert np.abs(s @ coeffs_of(one, b)).max() < 1e-12


QUADRATICS = {
    "1": (lambda x, y: 1 + 0 * x, lambda x, y: (0 * x, 0 * x)),
    "x": (lambda x, y: x, lambda x, y: (1 + 0 * x, 0 * x)),
    "y": (lambda x, y: y, lambda x, y: (0 * x, 1 + 0 * x)),
    "x2": (lambda x, y: x * x, lambda x, y: (2 * x, 0 * x)),
    "xy": (lambda x, y: x * y, lambda x, y: (y, x)),
    "y2": (lambda x, y: y * y, lambda x, y: (0 * x, 2 * y)),
}


@pytest.mark.parametrize("tri_name", ["ref", "skew"])
def test_stiffness_quadratic_exactness(tri_name, ref_tri, skew_tri):
    tri = ref_tri if tri_name == "ref" else skew_tri
    b = Basis("modal", 3)
    s = stiffness_matrix(b, tri)
    for p, (fp, gp) in QUADRATICS.items():
        for q, (fq, gq) in QUADRATICS.items():
            exact = tri_quad(tri, lambda x, y: sum(a * c for a, c in zip(gp(x, y), gq(x, y))))
            got = coeffs_of(fp, b, tri) @ s @ coeffs_of(fq, b, tri)
            assert got == pytest.approx(exact, abs=1e-11), (p, q)


def test_stiffness_reference_two_term_formula():
    # per-entry path: (grad u, grad v) = 1/4 int (chi u_x chi v_x + chi u_y chi v_y) / (2 - xi - eta)
    n = 3
    b = Basis("modal", n)
    table = build_table(2 * n)
    pairs = [grad_coeffs(b, divmod(i, n + 1), Geometry.REFERENCE_XY) for i in range(b.size)]
    ref = np.array(
        [
            [0.25 * sum(singular_inner(u, v, table) for u, v in zip(pu, pv)) for pv in pairs]
            for pu in pairs
        ]
    )
    np.testing.assert_allclose(stiffness_matrix(b), ref, atol=1e-12)


def test_stiffness_coverage():
    with pytest.raises(CoverageError):
        stiffness_matrix(6, table=build_table(6))


@pytest.mark.parametrize("tri_name", ["ref", "skew"])
def test_modal_nodal_congruence(tri_name, ref_tri, skew_tri, rng):
    tri = ref_tri if tri_name == "ref" else skew_tri
    n = 5
    modal, nodal = Basis("modal", n), Basis("nodal", n)
    t = modal.nodal_to_self
    for build in (stiffness_matrix, mass_matrix):
        sm, sn = build(modal, tri), build(nodal, tri)
        np.testing.assert_allclose(t.T @ sm @ t, sn, atol=1e-10)
    v = rng.standard_normal(nodal.size)
    sm, sn = stiffness_matrix(modal, tri), stiffness_matrix(nodal, tri)
    assert (t @ v) @ sm @ (t @ v) == pytest.approx(v @ sn @ v, rel=1e-10)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("method", ["interpolant", "lgl"])
def test_load_examples(kind, method):
    b = Basis(kind, 4)
    c1 = coeffs_of(one, b)
    assert load_vector(one, b, method=method) @ c1 == pytest.approx(0.5, abs=1e-12)
    assert load_vector(lambda x, y: x, b, method=method) @ c1 == pytest.approx(1 / 6, abs=1e-12)


@pytest.mark.parametrize("method", ["interpolant", "lgl"])
def test_load_self_convergence(method):
    vals = []
    for n in (16, 24):
        b = Basis("modal", n)
        vals.append(load_vector(lambda x, y: np.exp(x), b, method=method) @ coeffs_of(one, b))
    assert abs(vals[0] - vals[1]) < 1e-12
    exact = tri_quad(TriangleMap.reference(), lambda x, y: np.exp(x), m=20)
    assert vals[1] == pytest.approx(exact, abs=1e-12)


def test_load_interpolant_exact_for_y_n(skew_tri, rng):
    b = Basis("modal", 4)
    f = lambda x, y: x * x * y - 0.3 * y + 2.0  # noqa: E731  (in P_3, so in Y_4)
    c = rng.standard_normal(b.size)
    got = load_vector(f, b, skew_tri) @ c
    assert got == pytest.approx(coeffs_of(f, b, skew_tri) @ mass_matrix(b, skew_tri) @ c, rel=1e-13)
    with pytest.raises(ValueError):
        load_vector(f, b, method="simpson")


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 6])
def test_boundary_reference(kind, n):
    b = Basis(kind, n)
    c1 = coeffs_of(one, b)
    assert boundary_vector(one, b) @ c1 == pytest.approx(SQRT2, abs=1e-12)
    assert boundary_vector(lambda x, y: x, b) @ c1 == pytest.approx(SQRT2 / 2, abs=1e-12)
    assert not boundary_vector(lambda x, y: 0.0 * x, b).any()


def test_boundary_general_triangle(skew_tri):
    b = Basis("modal", 6)
    (x2, y2), (x3, y3) = skew_tri.vertices[1:]
    length = math.hypot(x2 - x3, y2 - y3)
    c1 = coeffs_of(one, b, skew_tri)
    assert boundary_vector(one, b, skew_tri) @ c1 == pytest.approx(length, abs=1e-12)
    # int_{V2 V3} x y ds by Gauss on the segment
    r = gauss_rule(6)
    t = (r.nodes + 1) / 2
    xs, ys = x2 + t * (x3 - x2), y2 + t * (y3 - y2)
    exact = length / 2 * r.integrate(xs * ys)
    cx = coeffs_of(lambda x, y: x, b, skew_tri)
    assert boundary_vector(lambda x, y: y, b, skew_tri) @ cx == pytest.approx(exact, abs=1e-12)


def test_discrete_inner_examples(ref_tri):
    n = 4
    ones = interpolate(one, n)
    x = interpolate(lambda x, y: x, n)
    y = interpolate(lambda x, y: y, n)
    assert discrete_inner(ones, ones, n) == pytest.approx(0.5, abs=1e-14)
    assert discrete_inner(x, y, n) == pytest.approx(1 / 24, abs=1e-14)
    c = interpolate(chi_xy, n)
    r = gauss_rule(6)
    xi, eta = np.meshgrid(r.nodes, r.nodes, indexing="ij")
    oracle = np.sum(np.outer(r.weights, r.weights) * ((2 - xi - eta) / 2) ** 3 / 8)
    assert discrete_inner(c, c, n) == pytest.approx(oracle, abs=1e-12)
    with pytest.raises(DimensionError):
        discrete_inner(ones, np.ones((4, 4)), n)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_discrete_inner_exactness(seed):
    n = 6
    rng = np.random.default_rng(seed)
    low = Basis("modal", n - 1)
    b = Basis("modal", n)
    cu, cv = rng.standard_normal((2, low.size))

    def as_fun(c):
        return lambda x, y: low.evaluate(c, *ref_inverse(x, y))

    u, v = interpolate(as_fun(cu), n), interpolate(as_fun(cv), n)
    exact = coeffs_of(as_fun(cu), b) @ mass_matrix(b) @ coeffs_of(as_fun(cv), b)
    assert discrete_inner(u, v, n) == pytest.approx(exact, abs=1e-11)


def test_assembled_system_reduction():
    b = Basis("modal", 2)
    sysm = AssembledSystem(
        n=2,
        basis=b,
        mass=np.eye(9),
        stiffness=np.eye(9),
        load=np.arange(9.0),
        boundary=np.ones(9),
        dirichlet_mask=b.dirichlet_mask,
        gamma=2.0,
    )
    mat, rhs = sysm.reduced()
    assert mat.shape == (4, 4)
    np.testing.assert_allclose(mat, 3 * np.eye(4))
    np.testing.assert_allclose(rhs, [5, 6, 8, 9])
