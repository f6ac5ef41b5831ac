"""Dirichlet problem for graphs ``z = u(x, y) > 0`` with ``|Du| < 1``:

    Q[u] = (1 - |Du|^2) Lap u + u_i u_j u_ij - alpha (1 - |Du|^2) / u = 0,
    u = phi on the boundary of a rectangle.

The operator is discretized with second-order central differences (9-point
stencil for ``u_xy``) at the interior nodes of a uniform grid. ``Q_t`` is
``Q`` with ``alpha`` replaced by ``alpha t``; the solve starts from the
maximal graph (``t = 0``) and follows ``t`` up to 1, each step by damped
Newton with an analytic sparse Jacobian.

The module also carries the radial solution on a disc, the boundary barrier
of the gradient estimate, and a report of the a priori bounds measured on a
computed solution.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.optimize import bisect
from scipy.sparse.linalg import spsolve

from .errors import (ConfigError, ContinuationStalled, NewtonDiverged, NoIntersection,
                     PositivityBreach, PositivityViolation, SpacelikeBreach, SpacelikeViolation)
from .lorentz import q_operator
from .profile import Check, ProfileSolution
from .rotational import PicardConfig, solve_rotational

BoundaryData = Union[float, Callable[[np.ndarray, np.ndarray], np.ndarray]]


@dataclass
class RectDomain:
    """Uniform grid on ``x_range x y_range`` with spacing ``h`` in both axes."""

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    h: float
    min_interior: int = 8

    def __post_init__(self):
        self.x_range = tuple(map(float, self.x_range))
        self.y_range = tuple(map(float, self.y_range))
        if not self.h > 0:
            raise ConfigError("grid spacing must be positive")
        self.nx = self._count(self.x_range)
        self.ny = self._count(self.y_range)
        if min(self.nx, self.ny) - 2 < self.min_interior:
            raise ConfigError(f"need at least {self.min_interior} interior nodes per axis")

    def _count(self, rng) -> int:
        n = (rng[1] - rng[0]) / self.h
        if not rng[1] > rng[0] or abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise ConfigError(f"interval {rng} is not a whole number of steps {self.h}")
        return int(round(n)) + 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.nx, self.ny

    @property
    def x(self) -> np.ndarray:
        return self.x_range[0] + self.h * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y_range[0] + self.h * np.arange(self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    @property
    def boundary_mask(self) -> np.ndarray:
        m = np.zeros(self.shape, dtype=bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        return m

    @property
    def ring_mask(self) -> np.ndarray:
        """Boundary nodes together with the first interior ring."""
        m = np.zeros(self.shape, dtype=bool)
        m[:2, :] = m[-2:, :] = m[:, :2] = m[:, -2:] = True
        return m

    def distance_to_boundary(self) -> np.ndarray:
        X, Y = self.mesh()
        return np.minimum.reduce([X - self.x_range[0], self.x_range[1] - X,
                                  Y - self.y_range[0], self.y_range[1] - Y])

    @property
    def center(self) -> tuple[float, float]:
        return 0.5 * sum(self.x_range), 0.5 * sum(self.y_range)


@dataclass
class GridField:
    values: np.ndarray
    domain: RectDomain

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.domain.shape:
            raise ValueError("values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid field has non-finite values")

    def at(self, x: float, y: float) -> float:
        """Value at a grid node (nearest node to ``(x, y)``)."""
        d = self.domain
        i = int(round((x - d.x_range[0]) / d.h))
        j = int(round((y - d.y_range[0]) / d.h))
        return float(self.values[i, j])

    def gradient(self) -> tuple[np.ndarray, np.ndarray]:
        """Second-order gradient on the whole grid (one-sided at the boundary)."""
        return tuple(np.gradient(self.values, self.domain.h, edge_order=2))


@dataclass
class TraceStep:
    t: float
    newton_iters: int
    residual_inf_norm: float
    max_grad: float
    min_u: float
    max_u: float


@dataclass
class ContinuationTrace:
    steps: list = field(default_factory=list)
    fields: list = field(default_factory=list)

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.steps])


@dataclass
class DirichletOptions:
    tol: float = 1e-10
    dt0: float = 0.1
    dt_max: float = 0.25
    dt_min: float = 1e-4
    easy_iters: int = 5
    newton_max: int = 40
    eps_s: float = 1e-6
    store_fields: bool = True
    threads: Optional[int] = None


def boundary_values(dom: RectDomain, phi: BoundaryData) -> np.ndarray:
    """``phi`` evaluated on the whole grid (only boundary nodes are used as data)."""
    X, Y = dom.mesh()
    if callable(phi):
        vals = np.broadcast_to(np.asarray(phi(X, Y), dtype=float), X.shape).copy()
    else:
        vals = np.full(X.shape, float(phi))
    return vals


def _thread_count(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("SMAX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"SMAX_THREADS must be an integer, got {env!r}") from None
    return 1


def _derivs(U: np.ndarray, h: float):
    c = U[1:-1, 1:-1]
    ux = (U[2:, 1:-1] - U[:-2, 1:-1]) / (2 * h)
    uy = (U[1:-1, 2:] - U[1:-1, :-2]) / (2 * h)
    uxx = (U[2:, 1:-1] - 2 * c + U[:-2, 1:-1]) / (h * h)
    uyy = (U[1:-1, 2:] - 2 * c + U[1:-1, :-2]) / (h * h)
    uxy = (U[2:, 2:] - U[2:, :-2] - U[:-2, 2:] + U[:-2, :-2]) / (4 * h * h)
    return c, ux, uy, uxx, uxy, uyy


def _block_eval(U, h, alpha, t, want_jac):
    u, ux, uy, uxx, uxy, uyy = _derivs(U, h)
    res = q_operator(u, ux, uy, uxx, uxy, uyy, alpha, t)
    if not want_jac:
        return res, None
    at = alpha * t
    w2 = 1.0 - ux * ux - uy * uy
    coef = (
        -2 * ux * uyy + 2 * uy * uxy + 2 * at * ux / u,  # d/d ux
        -2 * uy * uxx + 2 * ux * uxy + 2 * at * uy / u,  # d/d uy
        1.0 - uy * uy,                                    # d/d uxx
        1.0 - ux * ux,                                    # d/d uyy
        2 * ux * uy,                                      # d/d uxy
        at * w2 / (u * u),                                # d/d u
    )
    return res, coef


def _evaluate(U: np.ndarray, h: float, alpha: float, t: float, want_jac: bool, threads: int):
    """Interior residual (and partial derivatives) by row blocks.

    Blocks are fixed slices of the interior rows concatenated in order, so the
    result does not depend on the thread count.
    """
    nx = U.shape[0] - 2
    if threads <= 1 or nx < 2 * threads:
        return _block_eval(U, h, alpha, t, want_jac)
    cuts = np.linspace(0, nx, threads + 1).astype(int)
    blocks = [U[a:b + 2] for a, b in zip(cuts[:-1], cuts[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(lambda B: _block_eval(B, h, alpha, t, want_jac), blocks))
    res = np.concatenate([p[0] for p in parts])
    if not want_jac:
        return res, None
    coef = tuple(np.concatenate([p[1][k] for p in parts]) for k in range(6))
    return res, coef


class _Operators:
    """Sparse difference operators on the full grid restricted to interior rows."""

    def __init__(self, dom: RectDomain):
        nx, ny, h = dom.nx, dom.ny, dom.h

        def d1(n):
            return sp.diags([-0.5 / h, 0.5 / h], [-1, 1], shape=(n, n), format="csr")

        def d2(n):
            return sp.diags([1 / h**2, -2 / h**2, 1 / h**2], [-1, 0, 1], shape=(n, n), format="csr")

        Ix, Iy = sp.identity(nx, format="csr"), sp.identity(ny, format="csr")
        full = [sp.kron(d1(nx), Iy), sp.kron(Ix, d1(ny)), sp.kron(d2(nx), Iy),
                sp.kron(Ix, d2(ny)), sp.kron(d1(nx), d1(ny))]
        interior = ~dom.boundary_mask.ravel()
        self.idx = np.flatnonzero(interior)
        self.ops = [op.tocsr()[self.idx][:, self.idx] for op in full]
        self.n = len(self.idx)

    def jacobian(self, coef) -> sp.csr_matrix:
        cx, cy, cxx, cyy, cxy, cu = (c.ravel() for c in coef)
        Dx, Dy, Dxx, Dyy, Dxy = self.ops
        J = (sp.diags(cx) @ Dx + sp.diags(cy) @ Dy + sp.diags(cxx) @ Dxx
             + sp.diags(cyy) @ Dyy + sp.diags(cxy) @ Dxy + sp.diags(cu))
        return J.tocsc()


def assemble_Qt(u: GridField, alpha: float, t: float, phi: Optional[BoundaryData] = None,
                threads: Optional[int] = None) -> GridField:
    """Discrete ``Q_t[u]`` at interior nodes; ``u - phi`` on the boundary (0 without ``phi``)."""
    U = u.values
    _, ux, uy, *_ = _derivs(U, u.domain.h)
    if np.any(U[1:-1, 1:-1] <= 0):
        raise PositivityViolation("u <= 0 at an interior node")
    if np.any(ux * ux + uy * uy >= 1):
        raise SpacelikeViolation("discrete |Du| >= 1 at an interior node")
    res, _ = _evaluate(U, u.domain.h, alpha, t, False, _thread_count(threads))
    out = np.zeros_like(U)
    out[1:-1, 1:-1] = res
    if phi is not None:
        b = u.domain.boundary_mask
        out[b] = U[b] - boundary_values(u.domain, phi)[b]
    return GridField(out, u.domain)


def _max_grad(U, h) -> float:
    _, ux, uy, *_ = _derivs(U, h)
    return float(np.sqrt(np.max(ux * ux + uy * uy)))


@dataclass
class NewtonResult:
    values: np.ndarray
    iters: int
    residual: float


def newton_solve(dom: RectDomain, U0: np.ndarray, alpha: float, t: float,
                 opts: Optional[DirichletOptions] = None, source: Optional[np.ndarray] = None,
                 ops: Optional[_Operators] = None) -> NewtonResult:
    """Damped Newton for ``Q_t[u] = source`` at interior nodes, boundary fixed to ``U0``.

    Steps are halved until the residual sup norm decreases (Armijo, factor
    1/2) and the iterate stays admissible: ``u > 0`` and discrete
    ``|Du| < 1 - eps_s``. Five consecutive steps cut back by the spacelike
    (positivity) safeguard raise :class:`SpacelikeBreach`
    (:class:`PositivityBreach`).
    """
    opts = opts or DirichletOptions()
    ops = ops or _Operators(dom)
    threads = _thread_count(opts.threads)
    h = dom.h
    U = np.array(U0, dtype=float)
    f = 0.0 if source is None else np.asarray(source, dtype=float)
    lim = (1.0 - opts.eps_s) ** 2

    def admissible(V):
        _, ux, uy, *_ = _derivs(V, h)
        if np.any(V[1:-1, 1:-1] <= 0):
            return "positivity"
        if np.any(ux * ux + uy * uy >= lim):
            return "spacelike"
        return None

    bad = admissible(U)
    if bad:
        raise (PositivityViolation if bad == "positivity" else SpacelikeViolation)(
            f"initial iterate violates {bad}")
    res, coef = _evaluate(U, h, alpha, t, True, threads)
    res = res - f
    norm = float(np.max(np.abs(res)))
    streak = {"spacelike": 0, "positivity": 0}
    for it in range(opts.newton_max + 1):
        if norm <= opts.tol:
            return NewtonResult(U, it, norm)
        if it == opts.newton_max:
            break
        J = ops.jacobian(coef)
        step = spsolve(J, -res.ravel())
        if not np.all(np.isfinite(step)):
            raise NewtonDiverged("singular Newton system")
        dU = np.zeros_like(U)
        dU[1:-1, 1:-1] = step.reshape(res.shape)
        lam = 1.0
        hit = set()
        while True:
            V = U + lam * dU
            why = admissible(V)
            if why is None:
                r2, c2 = _evaluate(V, h, alpha, t, True, threads)
                r2 = r2 - f
                n2 = float(np.max(np.abs(r2)))
                if n2 <= (1.0 - 1e-4 * lam) * norm or n2 <= opts.tol:
                    break
            else:
                hit.add(why)
            lam *= 0.5
            if lam < 1e-12:
                raise NewtonDiverged(f"line search failed at t={t:.6g}, residual {norm:.3e}")
        for k in streak:
            streak[k] = streak[k] + 1 if k in hit else 0
        if streak["spacelike"] >= 5:
            raise SpacelikeBreach(f"iterates pinned at the gradient safeguard (t={t:.6g})")
        if streak["positivity"] >= 5:
            raise PositivityBreach(f"iterates pinned at u > 0 (t={t:.6g})")
        U, res, coef, norm = V, r2, c2, n2
    raise NewtonDiverged(f"no convergence in {opts.newton_max} iterations (residual {norm:.3e})")


def harmonic_extension(dom: RectDomain, phi: BoundaryData) -> np.ndarray:
    """Discrete harmonic function with the boundary values of ``phi``."""
    B = boundary_values(dom, phi)
    U = np.where(dom.boundary_mask, B, 0.0)
    ops = _Operators(dom)
    L = (ops.ops[2] + ops.ops[3]).tocsc()
    # contribution of the fixed boundary values to the interior rows
    rhs = -(_derivs(U, dom.h)[3] + _derivs(U, dom.h)[5]).ravel()
    U[1:-1, 1:-1] = spsolve(L, rhs).reshape(dom.nx - 2, dom.ny - 2)
    return U


def extend_boundary_data(dom: RectDomain, phi: BoundaryData) -> tuple[np.ndarray, float]:
    """Spacelike extension of the boundary data and its max gradient.

    Raises :class:`ConfigError` if the harmonic extension has a discrete
    gradient of size 1 or more anywhere.
    """
    U = harmonic_extension(dom, phi)
    gx, gy = np.gradient(U, dom.h, edge_order=2)
    g = float(np.sqrt(np.max(gx * gx + gy * gy)))
    if g >= 1:
        raise ConfigError(f"boundary data has no spacelike extension (max |D phi_ext| = {g:.4f})")
    return U, g


def solve_maximal(dom: RectDomain, phi: BoundaryData,
                  opts: Optional[DirichletOptions] = None) -> GridField:
    """Discrete maximal graph (``Q_0[u] = 0``) with boundary values ``phi``."""
    U0, _ = extend_boundary_data(dom, phi)
    return GridField(newton_solve(dom, U0, 0.0, 0.0, opts).values, dom)


@dataclass
class SolveReport:
    alpha: float
    t_steps: list
    residuals: list
    min_u: float
    max_u: float
    max_grad: float
    max_grad_location: tuple
    c1_bound: Optional[float]
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "t_steps": list(self.t_steps),
            "residuals": list(self.residuals),
            "min_u": self.min_u,
            "max_u": self.max_u,
            "max_grad": self.max_grad,
            "max_grad_location": list(self.max_grad_location),
            "c1_bound": self.c1_bound,
            "checks": {k: {"status": "pass" if c.passed else "fail", "value": c.value,
                           **({"note": c.note} if c.note else {})}
                       for k, c in self.checks.items()},
            "notes": list(self.notes),
        }


def solve_dirichlet(dom: RectDomain, phi: BoundaryData, alpha: float,
                    opts: Optional[DirichletOptions] = None):
    """Continuation in ``t`` from the maximal graph to ``Q[u] = 0``.

    Returns ``(GridField, ContinuationTrace, SolveReport)``.
    """
    opts = opts or DirichletOptions()
    B = boundary_values(dom, phi)
    if np.any(B[dom.boundary_mask] <= 0):
        raise ConfigError("boundary data must be positive")
    notes = []
    if alpha > 0:
        notes.append("alpha > 0: existence and uniqueness are not guaranteed")
        warnings.warn("solve_dirichlet with alpha > 0 has no existence guarantee", stacklevel=2)
    notes.append("rectangle corners: boundary is only piecewise smooth")
    ops = _Operators(dom)
    U0, _ = extend_boundary_data(dom, phi)
    trace = ContinuationTrace()

    def record(t, res: NewtonResult):
        V = res.values
        trace.steps.append(TraceStep(t, res.iters, res.residual, _max_grad(V, dom.h),
                                     float(V.min()), float(V.max())))
        if opts.store_fields:
            trace.fields.append(V.copy())

    cur = newton_solve(dom, U0, alpha, 0.0, opts, ops=ops)
    record(0.0, cur)
    t, dt, easy = 0.0, opts.dt0, 0
    while t < 1.0:
        t_next = min(1.0, round(t + dt, 12))
        try:
            nxt = newton_solve(dom, cur.values, alpha, t_next, opts, ops=ops)
        except (NewtonDiverged, SpacelikeBreach) as exc:
            dt *= 0.5
            easy = 0
            if dt < opts.dt_min:
                raise ContinuationStalled(f"t-step below {opts.dt_min} at t={t:.6g}: {exc}") from exc
            continue
        except PositivityBreach:
            if alpha < 0:
                raise
            dt *= 0.5
            if dt < opts.dt_min:
                raise ContinuationStalled(f"t-step below {opts.dt_min} at t={t:.6g}")
            continue
        if alpha < 0 and nxt.values.min() <= 0:
            raise PositivityBreach("solution with u <= 0 for alpha < 0")
        t, cur = t_next, nxt
        record(t, cur)
        easy = easy + 1 if cur.iters <= opts.easy_iters else 0
        if easy >= 2:
            dt = min(2 * dt, opts.dt_max)
            easy = 0
    u = GridField(cur.values, dom)
    report = estimate_report(u, phi, alpha, trace)
    report.notes[:0] = notes
    return u, trace, report


def solve_disk_radial(alpha: float, R: float, c: float, n_dim: int = 2,
                      picard: Optional[PicardConfig] = None) -> ProfileSolution:
    """Radial solution on the ball of radius ``R`` with boundary value ``c``.

    Take the axis solution ``v`` with ``v(0) = 1``, find where its graph meets
    the line ``z = c r / R`` and dilate by ``lam = R / r_o``. The axis segment
    uses 2048 quadrature panels by default: with the trapezoid rule's
    ``O(h^2)`` error this keeps the equation residual near ``1e-9``.
    """
    if not alpha < 0:
        raise ConfigError("the radial construction needs alpha < 0")
    if not (R > 0 and c > 0):
        raise ConfigError("R and c must be positive")
    v = solve_rotational(alpha, 1.0, n_dim=n_dim, cfg=picard or PicardConfig(quad_points=2048))
    lo, hi = float(v.r[0]), float(v.r[-1])

    def g(r):
        return float(v.eval(r)[0]) - c * r / R

    if not (g(lo) > 0 > g(hi)):
        raise NoIntersection("graph of v does not cross the line z = c r / R")
    r_o = bisect(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    lam = R / r_o
    sol = v.dilate(lam)
    sol.meta.update(R=R, c=c, r_o=r_o, lam=lam)
    return sol


def c1_bound(dom: RectDomain, phi: BoundaryData, alpha: float, n_dim: int = 2) -> tuple[float, ProfileSolution]:
    """Upper bound for ``u`` from dilations of the radial solution.

    ``v_lam(r) = lam v(r / lam)`` with ``v(0) = 1`` solves the equation and
    grows with ``lam``; the smallest ``lam`` with ``v_lam >= phi`` on the
    boundary (centre at the domain centre) gives ``u <= v_lam(0) = lam`` by
    comparison.
    """
    if not alpha < 0:
        raise ConfigError("the radial supersolution family needs alpha < 0")
    v = solve_rotational(alpha, 1.0, n_dim=n_dim)
    cx, cy = dom.center
    X, Y = dom.mesh()
    b = dom.boundary_mask
    rho = np.hypot(X[b] - cx, Y[b] - cy)
    B = boundary_values(dom, phi)[b]
    r_last = float(v.r[-1])

    def v_lam(lam, r):
        s = r / lam
        return lam * float(v.eval(min(s, r_last))[0]) if s <= r_last else 0.0

    lam0 = 0.0
    for r, p in zip(rho, B):
        lo = max(r / r_last, 1e-12) * (1 + 1e-12)
        hi = max(2 * lo, 2 * p, 1.0)
        while v_lam(hi, r) < p:
            hi *= 2
        lam0 = max(lam0, bisect(lambda L: v_lam(L, r) - p, lo, hi, xtol=1e-13))
    return lam0, v


def estimate_report(u: GridField, phi: BoundaryData, alpha: float,
                    trace: Optional[ContinuationTrace] = None) -> SolveReport:
    """A priori bounds measured on a solved field.

    Checks: the minimum sits on the boundary, the maximum gradient sits on
    the outer ring, ``u_t`` increases strictly in ``t`` at every interior
    node across stored steps, and ``max u <= C1``.
    """
    dom = u.domain
    U = u.values
    B = boundary_values(dom, phi)
    bmask = dom.boundary_mask
    min_phi = float(B[bmask].min())
    checks = {}
    checks["min_on_boundary"] = Check(abs(float(U.min()) - min_phi) <= 1e-8,
                                      float(U.min()) - min_phi)
    gx, gy = u.gradient()
    g = np.sqrt(gx * gx + gy * gy)
    k = np.unravel_index(int(np.argmax(g)), g.shape)
    loc = (float(dom.x[k[0]]), float(dom.y[k[1]]))
    checks["max_grad_on_ring"] = Check(bool(dom.ring_mask[k]), float(g[k]), f"at {loc}")
    checks["spacelike"] = Check(_max_grad(U, dom.h) < 1.0, _max_grad(U, dom.h))
    if trace is not None and len(trace.fields) >= 2:
        gaps = [float(np.min((b_ - a_)[1:-1, 1:-1])) for a_, b_ in zip(trace.fields, trace.fields[1:])]
        checks["monotone_in_t"] = Check(min(gaps) > 0, min(gaps), "min step-to-step increase")
    c1 = None
    if alpha < 0:
        c1, _ = c1_bound(dom, phi, alpha)
        checks["max_below_c1"] = Check(float(U.max()) <= c1, c1 - float(U.max()))
    steps = trace.steps if trace is not None else []
    return SolveReport(alpha, [s.t for s in steps], [s.residual_inf_norm for s in steps],
                       float(U.min()), float(U.max()), float(g[k]), loc, c1, checks)


def ellipticity_ok(U: np.ndarray, h: float, n_samples: int = 64, seed: int = 0) -> bool:
    """``(1-|Du|^2)|xi|^2 <= xi^T A xi <= |xi|^2`` for the frozen coefficients at
    every interior node and random ``xi``."""
    _, ux, uy, *_ = _derivs(U, h)
    rng = np.random.default_rng(seed)
    xi = rng.normal(size=(n_samples, 2))
    a11, a22, a12 = 1.0 - uy * uy, 1.0 - ux * ux, ux * uy
    q = (a11[..., None] * xi[:, 0] ** 2 + 2 * a12[..., None] * xi[:, 0] * xi[:, 1]
         + a22[..., None] * xi[:, 1] ** 2)
    n2 = np.sum(xi * xi, axis=1)
    w2 = (1.0 - ux * ux - uy * uy)[..., None]
    tol = 1e-12
    return bool(np.all(q >= w2 * n2 - tol) and np.all(q <= n2 + tol))


@dataclass
class BarrierReport:
    a: float
    k: float
    b: float
    eps: float
    delta_b: float
    mu: float
    q_max: float
    lower_ok: bool
    upper_ok: bool
    grad_max: float
    tube_nodes: int
    w: Optional[np.ndarray] = None

    @property
    def supersolution_ok(self) -> bool:
        return self.q_max < 0

    @property
    def gradient_ok(self) -> bool:
        return self.grad_max < 1

    @property
    def ok(self) -> bool:
        return self.supersolution_ok and self.lower_ok and self.upper_ok and self.gradient_ok


def barrier_height(d, a: float, k: float, b: float):
    """``a log(1 + k b^2 d)``."""
    return a * np.log1p(k * b * b * np.asarray(d, dtype=float))


def barrier_field(dom: RectDomain, phi_ext: np.ndarray, a: float, k: float, b: float) -> np.ndarray:
    """``w = a log(1 + k b^2 d) + phi_ext`` on the whole grid."""
    return barrier_height(dom.distance_to_boundary(), a, k, b) + phi_ext


def evaluate_barrier(dom: RectDomain, phi_ext: np.ndarray, alpha: float, u: GridField,
                     v0: GridField, a: float, k: float, b: float, eps: float,
                     delta_b: float = math.nan, mu: float = math.nan) -> BarrierReport:
    """Evaluate the three barrier conditions on the tube ``0 < d <= eps``."""
    w = barrier_field(dom, phi_ext, a, k, b)
    d = dom.distance_to_boundary()
    tube = (d > 0) & (d <= eps + 1e-12)
    inner = tube[1:-1, 1:-1]
    q, _ = _block_eval(w, dom.h, alpha, 1.0, False)
    q_max = float(q[inner].max()) if inner.any() else math.inf
    gx, gy = np.gradient(w, dom.h, edge_order=2)
    grad = np.sqrt(gx * gx + gy * gy)
    band = tube | dom.boundary_mask
    U = u.values
    lower = bool(np.all(v0.values[band] <= U[band] + 1e-12))
    upper = bool(np.all(U[band] <= w[band] + 1e-12))
    return BarrierReport(a, k, b, eps, delta_b, mu, q_max, lower, upper,
                         float(grad[band].max()), int(tube.sum()), w)


def verify_barrier(dom: RectDomain, phi: BoundaryData, alpha: float, u: GridField,
                   a: Optional[float] = None, k: Optional[float] = None,
                   b: Optional[float] = None, eps: Optional[float] = None,
                   v0: Optional[GridField] = None) -> BarrierReport:
    """Boundary barrier ``w = a log(1 + k b^2 d) + phi_ext`` for the gradient estimate.

    With all of ``a, k, b, eps`` given the barrier is evaluated as is.
    Otherwise the parameters are searched: ``delta_b`` from ``(1 + mu)/2`` up
    to 0.95 (``mu`` is the max gradient of the extended data), ``b`` on a log
    grid, ``eps`` a multiple of ``h`` up to half the inradius, ``k = 1/(b eps)``
    and ``a = 0.99 (delta_b - mu)/(k b^2)`` so that ``|Dw| < delta_b``. The
    first setting passing all checks is returned, otherwise the one with the
    smallest ``max Q[w]``.
    """
    phi_ext, mu = extend_boundary_data(dom, phi)
    if v0 is None:
        v0 = GridField(newton_solve(dom, phi_ext, 0.0, 0.0).values, dom)
    if None not in (a, k, b, eps):
        return evaluate_barrier(dom, phi_ext, alpha, u, v0, a, k, b, eps, math.nan, mu)
    inradius = 0.5 * min(dom.x_range[1] - dom.x_range[0], dom.y_range[1] - dom.y_range[0])
    eps_grid = dom.h * np.arange(2, int(0.5 * inradius / dom.h) + 1)
    deltas = np.unique(np.clip(np.r_[0.5 * (1 + mu), 0.8, 0.9, 0.95], 0.5 * (1 + mu), 0.95))
    best = None
    for db in deltas[::-1]:
        for bb in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0):
            for e in eps_grid:
                kk = 1.0 / (bb * e)
                aa = 0.99 * (db - mu) / (kk * bb * bb)
                rep = evaluate_barrier(dom, phi_ext, alpha, u, v0, aa, kk, bb, e, db, mu)
                if rep.ok:
                    return rep
                if best is None or rep.q_max < best.q_max:
                    best = rep
    return best
