"""Reference solutions computed independently of the package internals.

Each helper uses a different route from the library: scipy's DOP853 in the
original (u, u') variables instead of the RK4 march in (u, artanh u'),
adaptive quadrature instead of event detection, exact derivatives instead of
finite differences.
"""

import math

import numpy as np
from scipy.integrate import quad, solve_ivp


def translation_half_width(alpha, u0):
    """Half width of the maximal interval of ``u''/(1-u'^2) = alpha/u`` through
    a maximum at height ``u0`` (alpha < 0), from the first integral:
    ``1 - u'^2 = (u/u0)^(-2 alpha)``, so ``b = int_0^u0 du / sqrt(1 - (u/u0)^(-2 alpha))``."""
    p = -2.0 * alpha

    # s = 1 - t^2 removes the inverse square root at s = 1
    def f(t):
        if t == 0.0:
            return 2.0 / math.sqrt(p)
        return 2.0 * t / math.sqrt(-math.expm1(p * math.log1p(-t * t)))

    val, _ = quad(f, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    return u0 * val


def dop853_profile(alpha, k, r0, u0, up0, r1, rtol=1e-13, atol=1e-14, dense=True):
    """Integrate ``u'' = (1-u'^2)(alpha/u - k u'/r)`` from ``r0`` to ``r1``."""
    def rhs(r, y):
        u, p = y
        fr = k * p / r if k else 0.0
        return [p, (1.0 - p * p) * (alpha / u - fr)]
    return solve_ivp(rhs, (r0, r1), [u0, up0], method="DOP853", rtol=rtol, atol=atol,
                     dense_output=dense)


def dop853_until_edge(alpha, k, r0, u0, up0, direction, r_max=1e3, u_min=1e-6):
    """Integrate until ``u`` drops below ``u_min``; returns the event abscissa."""
    def rhs(r, y):
        u, p = y
        fr = k * p / r if k else 0.0
        return [p, (1.0 - p * p) * (alpha / u - fr)]

    def low(r, y):
        return y[0] - u_min
    low.terminal = True
    sol = solve_ivp(rhs, (r0, r0 + direction * r_max), [u0, up0], method="DOP853",
                    rtol=1e-13, atol=1e-15, events=low)
    return float(sol.t_events[0][0]) if len(sol.t_events[0]) else math.nan


def axis_series(alpha, u0, r, n_dim=2):
    """Two-term expansion of the regular axis solution: ``u = u0 + c r^2 + d r^4``.

    ``c = alpha/(2 n u0)``; ``d`` follows from matching the ``r^2`` terms of
    ``u'' + (n-1)u'/r = (1-u'^2) alpha/u``.
    """
    c = alpha / (2.0 * n_dim * u0)
    # LHS r^2 coefficient: 12 d + (n-1) 4 d = (8 + 4 n) d
    # RHS r^2 coefficient: alpha/u0 * (-c/u0) - alpha/u0 * 4 c^2
    rhs2 = -alpha * c / u0**2 - 4.0 * alpha * c * c / u0
    d = rhs2 / (8.0 + 4.0 * n_dim)
    return u0 + c * r**2 + d * r**4, 2 * c * r + 4 * d * r**3


def axis_reference(alpha, u0, r_eval, n_dim=2, r_start=1e-3):
    """Regular axis solution: series up to ``r_start``, DOP853 beyond."""
    u_s, p_s = axis_series(alpha, u0, r_start, n_dim)
    sol = dop853_profile(alpha, n_dim - 1, r_start, u_s, p_s, float(np.max(r_eval)))
    return sol.sol(r_eval)
