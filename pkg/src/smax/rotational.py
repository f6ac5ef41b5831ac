"""Rotational solutions about the timelike axis.

A graph ``z = u(|x|)`` over a disc of R^n solves the surface equation when

    u'' / (1 - u'^2) + (n - 1) u' / r = alpha / u.

The equation is singular at ``r = 0``. Solutions through the axis with
``u'(0) = 0`` are built by fixed-point iteration of the integral operator

    (T u)'(r) = phi^{-1}( r^{1-n} int_0^r t^{n-1} f(u, u') dt ),
    f(u, p) = alpha / (u sqrt(1 - p^2)),  phi^{-1}(y) = y / sqrt(1 + y^2),

on a short interval ``[0, delta]`` and then continued with the RK4 marcher.
Solutions that do not start on the axis are integrated both ways from an
interior point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import _ode
from ._ode import AXIS, INFINITE, LIGHTLIKE_SLOPE, ZERO_HEIGHT, MarchOptions
from .errors import ClassificationMismatch, InvalidInitial, NoContraction
from .profile import Check, Endpoint, ProfileSolution, assemble_bidirectional, extrapolate_endpoint


@dataclass
class PicardConfig:
    """Settings of the fixed-point solve near the axis.

    ``delta=None`` starts from ``0.1 min(u0, 1)``; on :class:`NoContraction`
    the interval is halved up to ``max_halvings`` times.
    """

    delta: Optional[float] = None
    quad_points: int = 256
    max_iters: int = 200
    contraction_tol: float = 1e-14
    max_halvings: int = 10

    def __post_init__(self):
        if self.delta is not None and not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.contraction_tol > 0:
            raise ValueError("contraction_tol must be positive")
        if self.quad_points < 2:
            raise ValueError("need at least 2 quadrature panels")


@dataclass
class PicardTrace:
    delta: float
    distances: list
    ball_radius: float
    halvings: int


def _weighted_cumulative(r: np.ndarray, f: np.ndarray, m: int) -> np.ndarray:
    """``int_0^r t^m f(t) dt`` with ``f`` linear on each panel and the weight exact.

    Plain trapezoid on ``t^m f`` is off by a factor ``(m+1)/2`` on the first
    panel, which matters for the axis slope when ``m > 1``.
    """
    a, b = r[:-1], r[1:]
    i_m = (b ** (m + 1) - a ** (m + 1)) / (m + 1)
    i_m1 = (b ** (m + 2) - a ** (m + 2)) / (m + 2)
    panel = (f[:-1] * (b * i_m - i_m1) + f[1:] * (i_m1 - a * i_m)) / (b - a)
    return np.concatenate([[0.0], np.cumsum(panel)])


def picard_operator(alpha: float, u0: float, r: np.ndarray, u: np.ndarray, p: np.ndarray,
                    n_dim: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """One application of the integral operator on the grid ``r`` (``r[0] = 0``).

    Returns ``(Tu, (Tu)')``. The inner integral treats ``f`` as piecewise
    linear against the exact weight ``t^(n-1)``; the outer one is the
    composite trapezoid rule. At ``r = 0`` the normalized inner integral takes
    its limit value 0.
    """
    f = alpha / (u * np.sqrt(1.0 - p * p))
    inner = _weighted_cumulative(r, f, n_dim - 1)
    g = np.zeros_like(r)
    g[1:] = inner[1:] / r[1:] ** (n_dim - 1)
    tp = g / np.sqrt(1.0 + g * g)
    tu = u0 + cumulative_trapezoid(tp, r, initial=0.0)
    return tu, tp


def _picard_once(alpha, u0, delta, cfg: PicardConfig, n_dim):
    r = np.linspace(0.0, delta, cfg.quad_points + 1)
    u = np.full_like(r, u0)
    p = np.zeros_like(r)
    dists = []
    ball = 0.0
    eps = min(u0, 1.0)
    worse = 0
    for _ in range(cfg.max_iters):
        tu, tp = picard_operator(alpha, u0, r, u, p, n_dim)
        if np.any(tu <= 0) or np.any(tp * tp >= 1):
            raise NoContraction("iterate left the admissible set")
        d = float(np.max(np.abs(tu - u)) + np.max(np.abs(tp - p)))
        ball = max(ball, float(np.max(np.abs(tu - u0)) + np.max(np.abs(tp))))
        if ball >= eps:
            raise NoContraction(f"iterate left the ball of radius {eps:.3g} around (u0, 0)")
        u, p = tu, tp
        if dists and d >= dists[-1] and d > cfg.contraction_tol:
            worse += 1
            if worse >= 3:
                raise NoContraction("C1 distance failed to shrink over 3 iterations")
        else:
            worse = 0
        dists.append(d)
        if d < cfg.contraction_tol:
            return r, u, p, dists, ball
    raise NoContraction(f"no convergence in {cfg.max_iters} iterations")


def picard_solve(alpha: float, u0: float, cfg: Optional[PicardConfig] = None,
                 n_dim: int = 2) -> ProfileSolution:
    """Fixed point of the axis operator on ``[0, delta]`` with ``u(0) = u0``, ``u'(0) = 0``."""
    if not (u0 > 0 and math.isfinite(u0)):
        raise InvalidInitial("u0 must be positive")
    if n_dim < 2:
        raise InvalidInitial("rotational profiles need n_dim >= 2")
    cfg = cfg or PicardConfig()
    delta = cfg.delta if cfg.delta is not None else 0.1 * min(u0, 1.0)
    last = None
    for halving in range(cfg.max_halvings + 1):
        try:
            r, u, p, dists, ball = _picard_once(alpha, u0, delta, cfg, n_dim)
            break
        except NoContraction as exc:
            last = exc
            delta /= 2
    else:
        raise NoContraction(f"no contraction after {cfg.max_halvings} halvings: {last}")
    trace = PicardTrace(delta, dists, ball, halving)
    return ProfileSolution(alpha, "rotation_z", r, u, p, dim_n=n_dim,
                           left=Endpoint(0.0, AXIS, u0, 0.0),
                           right=Endpoint(delta, _ode.STOP, float(u[-1]), float(p[-1])),
                           meta={"u0": u0, "up0": 0.0, "picard": trace})


def _join(seed: ProfileSolution, rs, us, ps, tag, opts) -> ProfileSolution:
    r = np.concatenate([seed.r, rs[1:]])
    u = np.concatenate([seed.u, us[1:]])
    psi = np.concatenate([np.arctanh(seed.up), ps[1:]])
    up = np.tanh(psi)
    keep = up * up < 1
    right = extrapolate_endpoint(rs, us, np.tanh(ps), tag, opts.eps_s)
    return ProfileSolution(seed.alpha, "rotation_z", r[keep], u[keep], up[keep], dim_n=seed.dim_n,
                           psi=psi[keep], left=seed.left, right=right, meta=dict(seed.meta))


def extend_rotational(alpha: float, seed: ProfileSolution, n_dim: int = 2,
                      opts: Optional[MarchOptions] = None) -> ProfileSolution:
    """Continue a seed solution to its maximal interval.

    A seed starting on the axis is marched forward from its last sample. Any
    other seed is treated as interior data at its last sample and
    integrated both ways.
    """
    opts = opts or MarchOptions()
    if seed.left.tag != AXIS:
        return solve_from_interior(alpha, float(seed.r[-1]), float(seed.u[-1]), float(seed.up[-1]),
                                   n_dim, opts)
    rs, us, ps, tag = _ode.march(alpha, n_dim - 1, float(seed.r[-1]), float(seed.u[-1]),
                                 math.atanh(float(seed.up[-1])), +1, opts)
    seed = ProfileSolution(alpha, "rotation_z", seed.r, seed.u, seed.up, dim_n=n_dim,
                           left=seed.left, meta=seed.meta)
    return _join(seed, rs, us, ps, tag, opts)


def solve_from_interior(alpha: float, r0: float, u0: float, up0: float, n_dim: int = 2,
                        opts: Optional[MarchOptions] = None) -> ProfileSolution:
    """Maximal rotational solution through ``(r0, u0)`` with slope ``up0``."""
    if not (r0 > 0 and math.isfinite(r0)):
        raise InvalidInitial("r0 must be positive")
    if not (u0 > 0 and math.isfinite(u0)):
        raise InvalidInitial("u0 must be positive")
    if not up0 * up0 < 1:
        raise InvalidInitial("initial slope must satisfy up0^2 < 1")
    if n_dim < 2:
        raise InvalidInitial("rotational profiles need n_dim >= 2")
    opts = opts or MarchOptions()
    return assemble_bidirectional(alpha, n_dim - 1, r0, u0, up0, opts, "rotation_z", n_dim)


def solve_rotational(alpha: float, u0: float, up0: float = 0.0, n_dim: int = 2,
                     cfg: Optional[PicardConfig] = None,
                     opts: Optional[MarchOptions] = None) -> ProfileSolution:
    """Maximal solution starting on the axis at height ``u0``.

    Only ``u'(0) = 0`` can be prescribed: a slope strictly between -1 and 1
    other than 0 admits no solution, and the lightlike starts ``u'(0) = +-1``
    are reached from interior data with :func:`solve_from_interior`.
    """
    if up0 != 0:
        if up0 * up0 < 1:
            raise InvalidInitial("no solution meets the axis with 0 < u'(0)^2 < 1")
        raise InvalidInitial("lightlike axis starts are obtained with solve_from_interior")
    seed = picard_solve(alpha, u0, cfg, n_dim)
    return extend_rotational(alpha, seed, n_dim, opts)


@dataclass
class RotClass:
    alpha_sign: str
    start: str
    features: frozenset = field(default_factory=frozenset)


# (sign of alpha, start) -> features forced by the qualitative theory
CASE_TABLE = {
    ("+", "axis_flat"): frozenset({"increasing", "unbounded"}),
    ("+", "axis_down"): frozenset({"global_min", "unbounded"}),
    ("+", "axis_up"): frozenset({"increasing", "unbounded"}),
    ("-", "axis_flat"): frozenset({"decreasing", "hits_zero_at_b"}),
    ("-", "axis_down"): frozenset({"decreasing", "hits_zero_at_b"}),
    ("-", "axis_up"): frozenset({"global_max", "hits_zero_at_b"}),
    ("-", "interior"): frozenset({"global_max", "hits_zero_at_a", "hits_zero_at_b"}),
}


def _start_kind(sol: ProfileSolution, slope_tol: float) -> str:
    left = sol.left
    if left.tag != AXIS:
        return "interior"
    if abs(left.up) <= slope_tol:
        return "axis_flat"
    if abs(left.up - 1.0) <= slope_tol:
        return "axis_up"
    if abs(left.up + 1.0) <= slope_tol:
        return "axis_down"
    return "axis_other"


def rotational_features(sol: ProfileSolution, slope_tol: float = 2e-2,
                        height_tol: float = 1e-4) -> frozenset:
    """Measured shape of a maximal rotational solution."""
    feats = set()
    up = sol.up[sol.r > 0]
    if np.all(up > 0):
        feats.add("increasing")
    elif np.all(up < 0):
        feats.add("decreasing")
    else:
        s = np.sign(up[up != 0])
        flips = np.flatnonzero(np.diff(s) != 0)
        if len(flips) == 1:
            feats.add("global_min" if s[flips[0]] < 0 else "global_max")
    zero_tags = (ZERO_HEIGHT, LIGHTLIKE_SLOPE)
    right, left = sol.right, sol.left
    if right.tag in zero_tags and right.u <= height_tol and abs(right.up + 1.0) <= slope_tol:
        feats.add("hits_zero_at_b")
    if left.tag in zero_tags and left.r > 0 and left.u <= height_tol and abs(left.up - 1.0) <= slope_tol:
        feats.add("hits_zero_at_a")
    if right.tag == INFINITE and sol.up[-1] > 0:
        feats.add("unbounded")
    return frozenset(feats)


def classify_rotational(sol: ProfileSolution, slope_tol: float = 2e-2,
                        height_tol: float = 1e-4) -> RotClass:
    """Classify a maximal rotational solution and check it against the case table.

    Raises :class:`ClassificationMismatch` when the measured features differ
    from the ones the sign of alpha and the start force.
    """
    sign = "+" if sol.alpha > 0 else "-"
    start = _start_kind(sol, slope_tol)
    feats = rotational_features(sol, slope_tol, height_tol)
    rc = RotClass(sign, start, feats)
    expected = CASE_TABLE.get((sign, start))
    if expected is None:
        raise ClassificationMismatch(f"no solution with alpha sign {sign} and start {start}")
    if feats != expected:
        raise ClassificationMismatch(
            f"alpha {sign}, start {start}: expected {sorted(expected)}, measured {sorted(feats)}")
    return rc


def zero_contact_checks(sol: ProfileSolution, height_tol: float = 1e-4,
                        slope_tol: float = 2e-2) -> list[Check]:
    """Wherever the profile reaches height ``<= height_tol`` off the axis, the
    slope there is lightlike and alpha is negative."""
    out = []
    for e in (sol.left, sol.right):
        if e.u is not None and math.isfinite(e.r) and e.r > 0 and e.u <= height_tol:
            ok = abs(e.up * e.up - 1.0) <= slope_tol and sol.alpha < 0
            out.append(Check(ok, e.up * e.up, f"r*={e.r:.6g}"))
    return out


def cone_profile(alpha: float, r_range=(0.1, 100.0), n: int = 1001, n_dim: int = 2):
    """Samples ``(r, u, u', u'')`` of the cone ``u = sqrt(alpha) r``."""
    if not alpha > 0:
        raise ValueError("the cone solution needs alpha > 0")
    r = np.linspace(*r_range, n)
    c = math.sqrt(alpha / (n_dim - 1))
    return r, c * r, np.full_like(r, c), np.zeros_like(r)


def rotational_residual(r, u, up, upp, alpha: float, n_dim: int = 2) -> np.ndarray:
    """Residual of the radial equation with the denominator cleared:
    ``u'' - (1 - u'^2)(alpha/u - (n-1) u'/r)``."""
    r, u, up, upp = map(np.asarray, (r, u, up, upp))
    return upp - (1.0 - up * up) * (alpha / u - (n_dim - 1) * up / r)
