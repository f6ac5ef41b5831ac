import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from smax.errors import DegenerateStar, DenominatorZero, PositivityViolation, SpacelikeViolation
from smax.lorentz import (Causal, GraphSample, LVec3, SurfaceMesh, causal_character, eqL_residual,
                          graph_mean_curvature, graph_Q_residual, lorentz_cross,
                          mesh_mean_curvature, minkowski_dot, normalize_timelike)
from smax.surfaces import (Dilate, RotateZ, TessellationSpec, TranslateHorizontal,
                           canonical_surface, transform)

finite = st.floats(-1e3, 1e3, allow_nan=False)
vec = arrays(np.float64, 3, elements=finite)


def test_dot_examples():
    assert minkowski_dot((0, 0, 1), (0, 0, 1)) == -1
    assert minkowski_dot((1, 0, 0), (0, 0, 1)) == 0
    assert minkowski_dot((1, 0, 1), (1, 0, 1)) == 0
    assert minkowski_dot(LVec3(1, 2, 3), LVec3(4, 5, 6)) == 4 + 10 - 18


def test_causal_examples():
    assert causal_character((1, 0, 0)) is Causal.SPACELIKE
    assert causal_character((0, 0, 1)) is Causal.TIMELIKE
    assert causal_character((1, 0, 1)) is Causal.LIGHTLIKE
    assert causal_character((0, 0, 0)) is Causal.ZERO
    # exact sign, no tolerance
    assert causal_character((1.0, 0.0, 1.0 + 1e-15)) is Causal.TIMELIKE


def test_cross_matches_determinant_definition():
    # <w, t> = det(u, v, t) for every t, solved symbolically
    u = sp.Matrix(sp.symbols("u0:3"))
    v = sp.Matrix(sp.symbols("v0:3"))
    w = sp.Matrix(sp.symbols("w0:3"))
    eqs = []
    for e in (sp.eye(3)[:, i] for i in range(3)):
        eqs.append(sp.Eq(w[0] * e[0] + w[1] * e[1] - w[2] * e[2], sp.Matrix.hstack(u, v, e).det()))
    sol = sp.solve(eqs, list(w))
    f = sp.lambdify([list(u), list(v)], [sol[w[i]] for i in range(3)])
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = rng.normal(size=3), rng.normal(size=3)
        np.testing.assert_allclose(lorentz_cross(a, b), f(a, b), atol=1e-13)


def test_cross_examples():
    np.testing.assert_array_equal(lorentz_cross((1, 0, 0), (0, 1, 0)), [0, 0, -1])
    np.testing.assert_array_equal(lorentz_cross((1, 2, 3), (1, 2, 3)), [0, 0, 0])


def test_cross_orthogonality_bulk():
    rng = np.random.default_rng(7)
    u, v = rng.uniform(-1, 1, size=(2, 1000, 3))
    w = lorentz_cross(u, v)
    assert np.max(np.abs(minkowski_dot(w, u))) <= 1e-12
    assert np.max(np.abs(minkowski_dot(w, v))) <= 1e-12


@given(vec, vec, vec, st.floats(-10, 10), st.floats(-10, 10))
def test_dot_bilinear_symmetric(u, v, w, a, b):
    assert minkowski_dot(u, v) == minkowski_dot(v, u)
    lhs = minkowski_dot(a * u + b * v, w)
    rhs = a * minkowski_dot(u, w) + b * minkowski_dot(v, w)
    scale = 1.0 + (abs(a) * np.abs(u).max() + abs(b) * np.abs(v).max()) * np.abs(w).max()
    assert abs(lhs - rhs) <= 1e-12 * scale


@given(vec, vec)
def test_cross_orthogonal_property(u, v):
    w = lorentz_cross(u, v)
    scale = 1.0 + np.abs(u).max() ** 2 * np.abs(v).max() + np.abs(u).max() * np.abs(v).max() ** 2
    assert abs(minkowski_dot(w, u)) <= 1e-12 * scale
    assert abs(minkowski_dot(w, v)) <= 1e-12 * scale


@given(arrays(np.float64, 2, elements=st.floats(-5, 5)), st.floats(0.1, 5))
def test_normalize_timelike(xy, s):
    n = np.array([xy[0], xy[1], -(np.hypot(*xy) + s)])
    m = normalize_timelike(n)
    assert m[2] > 0
    assert abs(minkowski_dot(m, m) + 1) <= 1e-12


def test_normalize_rejects_spacelike():
    with pytest.raises(SpacelikeViolation):
        normalize_timelike((1.0, 0.0, 0.5))


# --- graph operator -------------------------------------------------------

def _sym_graph(expr):
    x, y = sp.symbols("x y")
    parts = [expr, expr.diff(x), expr.diff(y), expr.diff(x, 2), expr.diff(x, y), expr.diff(y, 2)]
    fs = [sp.lambdify((x, y), p, "numpy") for p in parts]
    return lambda X, Y: tuple(f(X, Y) for f in fs)


def test_graph_residual_cylinder_over_cos():
    x, y = sp.symbols("x y")
    g = GraphSample.from_function(_sym_graph(sp.cos(x) + 0 * y), (-0.5, 0.5), (-0.5, 0.5), 0.05)
    assert np.max(np.abs(graph_Q_residual(g, -1.0, 1.0))) <= 1e-10


def test_graph_residual_hyperbolic_plane():
    x, y = sp.symbols("x y")
    g = GraphSample.from_function(_sym_graph(sp.sqrt(1 + x**2 + y**2)), (-1, 1), (-1, 1), 0.05)
    assert np.max(np.abs(graph_Q_residual(g, 2.0, 1.0))) <= 1e-10
    H = graph_mean_curvature(g.ux, g.uy, g.uxx, g.uxy, g.uyy)
    np.testing.assert_allclose(H, 2.0, atol=1e-12)


def test_graph_residual_constant_t0():
    g = GraphSample.from_function(lambda X, Y: (3.0, 0, 0, 0, 0, 0), (0, 1), (0, 1), 0.25)
    for alpha in (-3.0, 0.5, 7.0):
        assert np.all(graph_Q_residual(g, alpha, 0.0) == 0)


def test_graph_residual_errors():
    g = GraphSample.from_function(lambda X, Y: (1.0 + X, 1.0 + 0 * X, 0, 0, 0, 0), (0, 1), (0, 1), 0.5)
    with pytest.raises(SpacelikeViolation):
        graph_Q_residual(g, -1.0)
    g = GraphSample.from_function(lambda X, Y: (X - 0.5, 0.5, 0, 0, 0, 0), (0, 1), (0, 1), 0.5)
    with pytest.raises(PositivityViolation):
        graph_Q_residual(g, -1.0)


def test_graph_from_grid_second_order():
    errs = []
    for h in (0.05, 0.025):
        xs = np.arange(-0.5, 0.5 + h / 2, h)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        g = GraphSample.from_grid(np.cos(X) + 0 * Y, -0.5, -0.5, h)
        errs.append(np.max(np.abs(graph_Q_residual(g, -1.0))))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


# --- meshes ---------------------------------------------------------------

def _plane_patch(n=9, z=1.0):
    xs = np.linspace(-1, 1, n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    V = np.stack([X.ravel(), Y.ravel(), np.full(X.size, z)], axis=1)
    idx = np.arange(n * n).reshape(n, n)
    a, b, c, d = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel(), idx[1:, 1:].ravel(), idx[:-1, 1:].ravel()
    T = np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])
    return SurfaceMesh(V, T)


def test_plane_has_zero_curvature():
    m = _plane_patch()
    H = mesh_mean_curvature(m)
    assert np.max(np.abs(H)) <= 1e-12
    np.testing.assert_allclose(m.vertex_normals, np.tile([0, 0, 1.0], (m.n_vertices, 1)), atol=1e-12)


def test_mesh_invariants_checked():
    from smax.errors import HalfspaceViolation
    V = np.array([[0, 0, 1.0], [1, 0, 1.0], [0, 1, 1.0]])
    with pytest.raises(HalfspaceViolation):
        SurfaceMesh(V - [0, 0, 2], [[0, 1, 2]])
    with pytest.raises(SpacelikeViolation):
        SurfaceMesh([[0, 0, 1.0], [1, 0, 3.0], [0, 1, 1.0]], [[0, 1, 2]])


def test_degenerate_star():
    V = np.array([[0, 0, 1.0], [1, 0, 1.0], [0, 1, 1.0], [5, 5, 1.0]])
    m = SurfaceMesh(V, [[0, 1, 2]])
    with pytest.raises(DegenerateStar):
        mesh_mean_curvature(m)


def test_hyperbolic_plane_curvature_and_normals():
    m = canonical_surface("hyperbolic_plane", 1.0)
    deep = m.deep_interior_mask()
    H = mesh_mean_curvature(m)
    assert np.max(np.abs(H[deep] - 2.0)) <= 5e-2
    N = m.vertex_normals
    assert np.all(N[:, 2] > 0)
    assert np.max(np.abs(minkowski_dot(N, N) + 1)) <= 1e-9
    # the exact normal of H^2(1) is the position vector itself
    assert np.max(np.abs(N[deep] - m.vertices[deep])) <= 1e-2


@pytest.mark.parametrize("a_vec", [(0, 0, 1), (0, 1, 2), (0.3, -0.2, 1.0)])
def test_hyperbolic_plane_any_axis(a_vec):
    m = canonical_surface("hyperbolic_plane", 1.0)
    res = eqL_residual(m, 2.0, a_vec)
    assert np.max(np.abs(res[m.deep_interior_mask()])) <= 5e-2
    assert "residual" in m.channels and "H" in m.channels


def test_catenoid_is_maximal():
    m = canonical_surface("hyperbolic_catenoid", 1.0)
    H = mesh_mean_curvature(m)
    assert np.max(np.abs(H[m.deep_interior_mask()])) <= 5e-2


def test_cone_residual_away_from_apex():
    # the cone z = sqrt(alpha) r is spacelike only for alpha < 1
    m = canonical_surface("cone", 0.25)
    res = eqL_residual(m, 0.25)
    assert np.max(np.abs(res[m.deep_interior_mask()])) <= 5e-2


def test_denominator_zero():
    # the grid has vertices on x = 0, where <p, (1, 0, 0)> vanishes
    m = canonical_surface("hyperbolic_plane", 1.0)
    with pytest.raises(DenominatorZero):
        eqL_residual(m, 2.0, (1.0, 0.0, 0.0))


# --- symmetries of the equation with axis (0, 0, 1) -----------------------

SMALL = TessellationSpec(resolution=(21, None))


def _res(m, alpha):
    return eqL_residual(m, alpha)


def test_translation_invariance():
    m = canonical_surface("hyperbolic_plane", 1.0, SMALL)
    r0 = _res(m, 2.0)
    r1 = _res(transform(m, TranslateHorizontal((0.7, -0.3, 0.0))), 2.0)
    assert np.max(np.abs(r1 - r0)) <= 1e-12


def test_rotation_invariance():
    m = canonical_surface("hyperbolic_plane", 1.0, SMALL)
    r0 = _res(m, 2.0)
    m1 = transform(m, RotateZ(math.pi / 7))
    r1 = _res(m1, 2.0)
    assert np.max(np.abs(r1 - r0)) <= 1e-12


def test_dilation_covariance():
    m = canonical_surface("hyperbolic_plane", 1.0, SMALL)
    r0 = _res(m, 2.0)
    for lam in (0.5, 3.0):
        r1 = _res(transform(m, Dilate(lam, (0.2, -0.1, 0.0))), 2.0)
        assert np.max(np.abs(r1 - r0 / lam)) <= 1e-9
