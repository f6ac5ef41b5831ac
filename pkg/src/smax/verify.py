"""Closed-form verification suite behind ``smax verify``.

Every check compares a computed quantity against an exact solution or an
exact identity; nothing here depends on a stored reference value.
"""

from __future__ import annotations

import math

import numpy as np

from .lorentz import Causal, causal_character, eqL_residual, mesh_mean_curvature, minkowski_dot
from .profile import Check, first_integral_mu, solve_profile_1d
from .rotational import cone_profile, picard_solve, rotational_residual
from .surfaces import canonical_surface, lightlike_surface, rotate_x_axis

MESH_TOL = 5e-2


def translation_residual(u, up, upp, alpha: float) -> np.ndarray:
    """``u'' - (1-u'^2) alpha/u``: the profile equation with the denominator
    cleared, which stays well conditioned where ``u'`` approaches 1."""
    return upp - (1.0 - up * up) * alpha / u


def catenary_residual(a: float, b: float = 0.0, n: int = 1000) -> np.ndarray:
    """Profile residual of ``u = sin(ax+b)/a`` at alpha = -1, with analytic
    derivatives on ``n`` interior points of the arch."""
    x = np.linspace(-b / a, (math.pi - b) / a, n + 2)[1:-1]
    s, c = np.sin(a * x + b), np.cos(a * x + b)
    u, up, upp = s / a, c, -a * s
    return translation_residual(u, up, upp, -1.0)


def hyperbola_residual(a: float, half_width: float = 5.0, n: int = 1000) -> np.ndarray:
    """Same residual for ``u = sqrt(1+a^2x^2)/a`` at alpha = 1."""
    x = np.linspace(-half_width, half_width, n)
    q = np.sqrt(1.0 + a * a * x * x)
    u, up, upp = q / a, a * x / q, a / q**3
    return translation_residual(u, up, upp, 1.0)


def _max_abs(v) -> float:
    v = np.asarray(v, dtype=float)
    return float(np.max(np.abs(v[np.isfinite(v)])))


def _mesh_residual(mesh, alpha, a_vec=(0.0, 0.0, 1.0)) -> float:
    res = eqL_residual(mesh, alpha, a_vec)
    return float(np.max(np.abs(res[mesh.deep_interior_mask()])))


def canonical_suite() -> dict:
    """Run the anchored checks; returns ``{name: Check}``."""
    out = {}
    q = minkowski_dot((1.0, 0.0, 1.0), (1.0, 0.0, 1.0))
    out["lightlike_axis"] = Check(q == 0 and causal_character((1, 0, 1)) is Causal.LIGHTLIKE, abs(q))

    for a in (0.5, 1.0, 2.0):
        r = _max_abs(catenary_residual(a))
        out[f"catenary_a{a:g}"] = Check(r <= 1e-12, r)
        r = _max_abs(hyperbola_residual(a))
        out[f"hyperbola_a{a:g}"] = Check(r <= 1e-12, r)

    for alpha in (0.5, 1.0, 2.0, 4.0):
        res = rotational_residual(*cone_profile(alpha), alpha)
        r = _max_abs(res)
        out[f"cone_alpha{alpha:g}"] = Check(r <= 1e-12, r)

    sol = solve_profile_1d(-1.0, 1.0, 0.0)
    err = abs((sol.domain[1] - sol.domain[0]) - math.pi)
    out["catenary_width"] = Check(err <= 1e-6, err, "b - a = pi")
    drift = first_integral_mu(sol)[1]
    out["first_integral"] = Check(drift <= 1e-7, drift)

    pic = picard_solve(2.0, 1.0)
    upp0 = float(pic.upp[0])
    out["axis_curvature"] = Check(abs(upp0 - 1.0) <= 1e-4, upp0, "u''(0) = alpha/(n u0)")

    plane = canonical_surface("hyperbolic_plane", 1.0)
    H = mesh_mean_curvature(plane)[plane.deep_interior_mask()]
    err = float(np.max(np.abs(H - 2.0)))
    out["hyperbolic_plane_H"] = Check(err <= MESH_TOL, err)
    for a_vec in ((0.0, 0.0, 1.0), (0.3, -0.2, 1.0)):
        r = _mesh_residual(plane, 2.0, a_vec)
        out[f"hyperbolic_plane_a{a_vec}"] = Check(r <= MESH_TOL, r)

    cat = canonical_surface("hyperbolic_catenoid", 1.0)
    r = float(np.max(np.abs(mesh_mean_curvature(cat)[cat.deep_interior_mask()])))
    out["hyperbolic_catenoid_H"] = Check(r <= MESH_TOL, r)

    r = _mesh_residual(canonical_surface("cone", 0.25), 0.25)
    out["cone_mesh"] = Check(r <= MESH_TOL, r)

    for beta in (-2.0, 0.5):
        mesh = rotate_x_axis(solve_profile_1d(beta, 0.5))
        r = _mesh_residual(mesh, beta + 1.0)
        out[f"x_rotation_beta{beta:g}"] = Check(r <= MESH_TOL, r, "alpha = beta + 1")

    for alpha, m in ((0.5, 10.0), (2.0, 1.0)):
        r = _mesh_residual(lightlike_surface(alpha, m), alpha, (1.0, 0.0, 1.0))
        out[f"null_rotation_alpha{alpha:g}"] = Check(r <= MESH_TOL, r)
    return out
