"""Translation-invariant profiles: ``u'' / (1 - u'^2) = alpha / u``.

A spacelike curve ``z = u(x)`` solving this equation, translated along the
y-axis, sweeps an alpha-singular maximal surface. This module integrates the
equation to its maximal interval, tabulates the two explicit families
(``sin(ax+b)/a`` for alpha = -1, ``sqrt(1+a^2x^2)/a`` for alpha = 1), checks
the conserved quantity ``1/(1-u'^2) = mu u^(2 alpha)``, and reports the
qualitative shape of solutions through a critical point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import _ode
from ._ode import AXIS, INFINITE, LIGHTLIKE_SLOPE, ZERO_HEIGHT, MarchOptions
from .errors import InvalidInitial, PositivityViolation, SpacelikeViolation

AXIS_KINDS = ("translation", "rotation_z", "rotation_x", "lightlike")
ENDPOINT_TAGS = (AXIS, ZERO_HEIGHT, INFINITE, LIGHTLIKE_SLOPE)


@dataclass
class Endpoint:
    r: float
    tag: str
    u: Optional[float]
    up: Optional[float]


@dataclass
class ProfileSolution:
    """Sampled solution ``u(r)`` of a profile equation.

    ``dim_n`` is the radial dimension (1 for translation profiles, so the
    friction term ``(dim_n - 1) u'/r`` vanishes). ``psi`` optionally holds
    ``artanh(u')`` at the samples; when present it is used for
    ``1/(1-u'^2)`` to avoid cancellation.
    """

    alpha: float
    axis_kind: str
    r: np.ndarray
    u: np.ndarray
    up: np.ndarray
    dim_n: int = 1
    psi: Optional[np.ndarray] = None
    left: Optional[Endpoint] = None
    right: Optional[Endpoint] = None
    exact: Optional[Callable] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        self.up = np.asarray(self.up, dtype=float)
        if self.axis_kind not in AXIS_KINDS:
            raise ValueError(f"unknown axis kind {self.axis_kind!r}")
        if np.any(self.u <= 0):
            raise PositivityViolation("profile has u <= 0")
        if np.any(self.up**2 >= 1):
            raise SpacelikeViolation("profile has u'^2 >= 1")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("samples must be strictly increasing in r")
        if self.left is None:
            self.left = Endpoint(float(self.r[0]), "sampled", float(self.u[0]), float(self.up[0]))
        if self.right is None:
            self.right = Endpoint(float(self.r[-1]), "sampled", float(self.u[-1]), float(self.up[-1]))

    @property
    def k(self) -> int:
        return self.dim_n - 1

    @property
    def domain(self) -> tuple[float, float]:
        return self.left.r, self.right.r

    @property
    def upp(self) -> np.ndarray:
        """``u''`` at the samples, from the equation itself."""
        return np.array([_ode.profile_upp(self.alpha, self.k, r, u, p)
                         for r, u, p in zip(self.r, self.u, self.up)])

    @property
    def inv_w2(self) -> np.ndarray:
        """``1 / (1 - u'^2)`` at the samples."""
        if self.psi is not None:
            return np.cosh(self.psi) ** 2
        return 1.0 / (1.0 - self.up**2)

    def _splines(self):
        if not hasattr(self, "_sp"):
            self._sp = (CubicHermiteSpline(self.r, self.u, self.up),
                        CubicHermiteSpline(self.r, self.up, self.upp))
        return self._sp

    def eval(self, r):
        """Cubic Hermite interpolation of ``(u, u')`` inside the sampled range."""
        r = np.asarray(r, dtype=float)
        if np.any(r < self.r[0]) or np.any(r > self.r[-1]):
            raise ValueError("evaluation point outside the sampled range")
        su, sp = self._splines()
        return su(r), sp(r)

    def curvature(self) -> np.ndarray:
        """Curvature of ``(x, u(x))`` as a spacelike curve of the Lorentz plane."""
        return self.upp / (1.0 - self.up**2) ** 1.5

    def ode_residual(self, w2_min: float = 1e-6) -> np.ndarray:
        """Residual of the profile equation with ``u''`` from finite differences.

        ``u''`` is obtained by differentiating the ``u'`` samples with 5-point
        finite-difference weights on the (non-uniform) sample grid, so the
        result is an independent check of the stored samples rather than of
        the right-hand side. NaN within two samples of either end, at ``r = 0``
        for radial profiles, and where ``1 - u'^2 < w2_min`` (the quotient is
        dominated by rounding there).
        """
        res = np.full(len(self.r), np.nan)
        for i in range(2, len(self.r) - 2):
            w = fd_weights(self.r[i], self.r[i - 2:i + 3], 1)
            upp = float(w @ self.up[i - 2:i + 3])
            ri, ui, pi = self.r[i], self.u[i], self.up[i]
            if 1.0 - pi * pi < w2_min or (self.k and ri == 0):
                continue
            fr = self.k * pi / ri if self.k else 0.0
            res[i] = upp / (1.0 - pi * pi) + fr - self.alpha / ui
        return res

    def dilate(self, lam: float) -> "ProfileSolution":
        """``u_lam(r) = lam u(r / lam)``: dilation from a point of height 0."""
        def ep(e):
            return Endpoint(e.r * lam, e.tag, None if e.u is None else e.u * lam, e.up)
        return ProfileSolution(
            self.alpha, self.axis_kind, self.r * lam, self.u * lam, self.up.copy(),
            dim_n=self.dim_n, psi=None if self.psi is None else self.psi.copy(),
            left=ep(self.left), right=ep(self.right), meta=dict(self.meta, dilation=lam))


def fd_weights(x0: float, xs: np.ndarray, m: int) -> np.ndarray:
    """Fornberg weights for the ``m``-th derivative at ``x0`` from nodes ``xs``."""
    n = len(xs)
    c = np.zeros((n, m + 1))
    c1, c4 = 1.0, xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for kk in range(mn, 0, -1):
                    c[i, kk] = c1 * (kk * c[i - 1, kk - 1] - c5 * c[i - 1, kk]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for kk in range(mn, 0, -1):
                c[j, kk] = (c4 * c[j, kk] - kk * c[j, kk - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def extrapolate_endpoint(rs, us, ups, tag, eps_s=1e-10) -> Endpoint:
    """Limit values at the end of a march, from its last three samples.

    For ``u -> 0`` ends the endpoint is located by one secant step on ``u``;
    ``u'`` is extrapolated there with the quadratic through the last three
    samples. Infinite ends report ``u = inf`` and the last slope.
    """
    r3 = np.asarray(rs[-3:], dtype=float)
    u3 = np.asarray(us[-3:], dtype=float)
    p3 = np.asarray(ups[-3:], dtype=float)
    if tag == INFINITE:
        return Endpoint(math.copysign(math.inf, r3[-1]), tag, math.inf, float(p3[-1]))
    if tag == _ode.STOP:
        return Endpoint(float(r3[-1]), tag, float(u3[-1]), float(p3[-1]))
    if tag == AXIS:
        r_end = 0.0
        u_end = float(np.polyval(np.polyfit(r3, u3, 2), r_end))
    else:
        r_end = float(r3[-1] - u3[-1] / p3[-1])
        u_end = 0.0
    up_end = float(np.polyval(np.polyfit(r3 - r_end, p3, 2), 0.0))
    up_end = max(-1.0, min(1.0, up_end))
    return Endpoint(r_end, tag, u_end, up_end)


def _check_initial(u0, up0):
    if not (u0 > 0 and math.isfinite(u0)):
        raise InvalidInitial("u0 must be positive")
    if not (up0 * up0 < 1):
        raise InvalidInitial("initial slope must satisfy up0^2 < 1")


def assemble_bidirectional(alpha, k, r0, u0, up0, opts: MarchOptions, axis_kind, dim_n,
                           left_stop=None):
    """March both ways from ``(r0, u0, up0)`` and join the two halves."""
    psi0 = math.atanh(up0)
    rf, uf, pf, tf = _ode.march(alpha, k, r0, u0, psi0, +1, opts)
    rb, ub, pb, tb = _ode.march(alpha, k, r0, u0, psi0, -1, opts)
    r = np.array(rb[::-1] + rf[1:])
    u = np.array(ub[::-1] + uf[1:])
    psi = np.array(pb[::-1] + pf[1:])
    up = np.tanh(psi)
    left = extrapolate_endpoint(rb, ub, np.tanh(pb), tb, opts.eps_s)
    right = extrapolate_endpoint(rf, uf, np.tanh(pf), tf, opts.eps_s)
    # drop samples whose slope rounds to +-1 in double precision
    keep = up * up < 1
    return ProfileSolution(alpha, axis_kind, r[keep], u[keep], up[keep], dim_n=dim_n,
                           psi=psi[keep], left=left, right=right,
                           meta={"r0": r0, "u0": u0, "up0": up0})


def solve_profile_1d(alpha: float, u0: float, up0: float = 0.0,
                     opts: Optional[MarchOptions] = None) -> ProfileSolution:
    """Maximal solution of the translation profile equation through ``(0, u0, up0)``."""
    _check_initial(u0, up0)
    opts = opts or MarchOptions()
    return assemble_bidirectional(alpha, 0, 0.0, u0, up0, opts, "translation", 1)


def closed_form_catenary(a: float, b: float = 0.0, n: int = 1001) -> ProfileSolution:
    """``u = sin(ax + b)/a`` on the open interval where it is positive (alpha = -1)."""
    if a == 0:
        raise ValueError("a must be nonzero")
    if a < 0:  # sin(ax+b)/a == sin(|a|x - b)/|a|
        a, b = -a, -b
    lo, hi = -b / a, (math.pi - b) / a
    x = np.linspace(lo, hi, n + 2)[1:-1]
    u = np.sin(a * x + b) / a
    up = np.cos(a * x + b)

    def exact(xx):
        return np.sin(a * xx + b) / a, np.cos(a * xx + b)

    end = [Endpoint(lo, LIGHTLIKE_SLOPE, 0.0, 1.0), Endpoint(hi, LIGHTLIKE_SLOPE, 0.0, -1.0)]
    return ProfileSolution(-1.0, "translation", x, u, up, left=end[0], right=end[1],
                           exact=exact, meta={"a": a, "b": b})


def closed_form_hyperbola(a: float, half_width: Optional[float] = None,
                          n: int = 1001) -> ProfileSolution:
    """``u = sqrt(1 + a^2 x^2)/a`` (alpha = 1), tabulated on ``|x| <= half_width``."""
    if not a > 0:
        raise ValueError("a must be positive")
    L = half_width if half_width is not None else 5.0 / a
    x = np.linspace(-L, L, n)
    u = np.sqrt(1.0 + a * a * x * x) / a
    up = a * x / np.sqrt(1.0 + a * a * x * x)
    psi = np.arcsinh(a * x)

    def exact(xx):
        s = np.sqrt(1.0 + a * a * xx * xx)
        return s / a, a * xx / s

    return ProfileSolution(1.0, "translation", x, u, up, psi=psi, exact=exact, meta={"a": a})


def first_integral_mu(sol: ProfileSolution) -> tuple[float, float]:
    """Constant ``mu`` of ``1/(1-u'^2) = mu u^(2 alpha)`` and its relative drift.

    ``mu`` is taken at the first sample; the drift is
    ``max |1/(1-u'^2) / (mu u^(2 alpha)) - 1|`` over all samples.
    """
    if sol.axis_kind != "translation":
        raise ValueError("first integral exists for translation profiles only")
    # log form: log cosh^2(psi) - 2 alpha log u stays finite as u -> 0
    g = np.log(sol.inv_w2) - 2.0 * sol.alpha * np.log(sol.u)
    mu = float(np.exp(g[0]))
    drift = float(np.max(np.abs(np.expm1(g - g[0]))))
    return mu, drift


@dataclass
class Check:
    passed: bool
    value: float
    note: str = ""


@dataclass
class QualReport:
    alpha: float
    checks: dict

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {name}: {c.value:.6g} {c.note}".rstrip()
                for name, c in self.checks.items()]


def classify_profile(sol: ProfileSolution, slope_tol: float = 2e-2,
                     height_tol: float = 1e-4) -> QualReport:
    """Check the qualitative picture for a translation profile through a critical point.

    alpha > 0: defined on the whole line, convex, one minimum, ``u' -> 1``.
    alpha < 0: bounded interval, concave, one maximum, ``u -> 0`` and
    ``u' -> -1`` at the right end. Both: symmetric about the critical point.
    """
    a = sol.alpha
    checks = {}
    r = sol.r
    inner = r[(r >= -r[-1]) & (r <= -r[0])] if r[0] < 0 < r[-1] else r[:0]
    if len(inner):
        u_plus, _ = sol.eval(inner)
        u_minus, _ = sol.eval(-inner)
        sym = float(np.max(np.abs(u_plus - u_minus) / (1.0 + np.abs(u_plus))))
    else:
        sym = math.inf
    checks["symmetric"] = Check(sym <= 1e-9, sym)
    upp = sol.upp
    imax = int(np.argmax(sol.u)) if a < 0 else int(np.argmin(sol.u))
    sign_changes = int(np.count_nonzero(np.diff(np.sign(sol.up[sol.up != 0])) != 0))
    checks["unique_extremum"] = Check(sign_changes == 1, float(r[imax]), "location")
    if a > 0:
        full = math.isinf(sol.left.r) and math.isinf(sol.right.r)
        checks["domain_is_line"] = Check(full, sol.right.r)
        checks["convex"] = Check(bool(np.all(upp > 0)), float(upp.min()))
        checks["u_unbounded"] = Check(sol.right.tag == INFINITE and sol.u[-1] > sol.u[imax], float(sol.u[-1]))
        checks["slope_to_one"] = Check(abs(sol.right.up - 1.0) <= slope_tol, float(sol.right.up))
    else:
        bounded = math.isfinite(sol.left.r) and math.isfinite(sol.right.r)
        checks["domain_bounded"] = Check(bounded, sol.right.r - sol.left.r)
        checks["concave"] = Check(bool(np.all(upp < 0)), float(upp.max()))
        checks["height_to_zero"] = Check(sol.right.u is not None and sol.right.u <= height_tol,
                                         float(sol.right.u))
        checks["slope_to_minus_one"] = Check(abs(sol.right.up + 1.0) <= slope_tol, float(sol.right.up))
    return QualReport(a, checks)
