"""Meshes of invariant surfaces and of the exact canonical examples.

Every constructor samples a parametrization ``X(s, t)`` on a structured grid
and triangulates it; the result is a validated :class:`SurfaceMesh` so the
residual evaluators in :mod:`smax.lorentz` can be pointed at it directly.

Families:

* translation along the y-axis, ``X = (s, t, u(s))``;
* hyperbolic rotation about the x-axis, ``X = (s, u sinh t, u cosh t)``;
* Euclidean rotation about the z-axis, ``X = (s cos t, s sin t, u(s))``;
* null rotation about the lightlike axis spanned by ``(1, 0, 1)``,
  ``X = (u + s - t^2 s, -2ts, u - s - t^2 s)``.

A profile solving the translation equation with parameter ``beta`` gives,
after hyperbolic rotation about the x-axis, a surface solving the surface
equation with ``alpha = beta + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainEmpty, InvalidTransform, ConfigError
from .lorentz import ETA, SurfaceMesh
from .profile import ProfileSolution


@dataclass
class TessellationSpec:
    """Parameter rectangle and grid resolution of a structured mesh.

    ``s_range=None`` lets each constructor pick a default. ``t_range`` is the
    group parameter; for Euclidean rotations it is ignored and ``t`` runs
    over a full period. A ``None`` second resolution picks the number of
    ``t`` samples that makes the cells roughly square in the induced metric,
    which is what the quadric-fit curvature estimate needs.
    """

    s_range: Optional[tuple[float, float]] = None
    t_range: tuple[float, float] = (-2.0, 2.0)
    resolution: tuple[int, Optional[int]] = (41, None)

    def __post_init__(self):
        ns, nt = self.resolution
        if ns < 2 or (nt is not None and nt < 2):
            raise ConfigError("resolution must be at least 2 in each direction")
        if self.s_range is not None and not self.s_range[0] < self.s_range[1]:
            raise ConfigError("degenerate s_range")
        if not self.t_range[0] < self.t_range[1]:
            raise ConfigError("degenerate t_range")

    def with_s(self, s_range) -> "TessellationSpec":
        return TessellationSpec(tuple(map(float, s_range)), self.t_range, self.resolution)


def grid_triangles(P: np.ndarray, periodic_t: bool = False) -> np.ndarray:
    """Triangulate an ``(ns, nt, 3)`` point grid, splitting each quad along its
    shorter diagonal (Euclidean length)."""
    ns, nt = P.shape[:2]
    idx = np.arange(ns * nt).reshape(ns, nt)
    if periodic_t:
        idx = np.concatenate([idx, idx[:, :1]], axis=1)
        P = np.concatenate([P, P[:, :1]], axis=1)
    a, b = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel()
    c, d = idx[1:, 1:].ravel(), idx[:-1, 1:].ravel()
    d1 = np.linalg.norm(P[1:, 1:] - P[:-1, :-1], axis=-1).ravel()
    d2 = np.linalg.norm(P[:-1, 1:] - P[1:, :-1], axis=-1).ravel()
    short = d1 <= d2
    tri1 = np.where(short[:, None], np.stack([a, b, c], 1), np.stack([a, b, d], 1))
    tri2 = np.where(short[:, None], np.stack([a, c, d], 1), np.stack([b, c, d], 1))
    return np.concatenate([tri1, tri2])


def _mesh_from_grid(P: np.ndarray, periodic_t: bool = False, check: bool = True) -> SurfaceMesh:
    return SurfaceMesh(P.reshape(-1, 3), grid_triangles(P, periodic_t), check=check)


def _induced_len(d: np.ndarray) -> np.ndarray:
    return np.sqrt(np.abs(np.einsum("...i,...i->...", d * ETA, d)))


def _sweep(X, s: np.ndarray, t_range, nt: Optional[int], periodic: bool = False) -> np.ndarray:
    """Sample ``X(S, T)`` on ``s`` times a ``t`` grid; returns the point grid."""
    def tgrid(n):
        if periodic:
            return np.linspace(t_range[0], t_range[1], n, endpoint=False)
        return np.linspace(t_range[0], t_range[1], n)

    if nt is None:
        P = X(*np.meshgrid(s, tgrid(41), indexing="ij"))
        ls = np.median(_induced_len(np.diff(P, axis=0)))
        lt = np.median(_induced_len(np.diff(P, axis=1)))
        nt = int(np.clip(round(40 * lt / ls * (len(s) - 1) / 40) + 1, 11, 401))
    return X(*np.meshgrid(s, tgrid(nt), indexing="ij"))


def _profile_values(profile: ProfileSolution, s: np.ndarray):
    if profile.exact is not None:
        u, up = profile.exact(s)
    else:
        u, up = profile.eval(s)
    return np.asarray(u, dtype=float), np.asarray(up, dtype=float)


def _default_s_range(profile: ProfileSolution, max_slope: float = 0.75) -> tuple[float, float]:
    ok = np.abs(profile.up) <= max_slope
    if not np.any(ok):
        raise DomainEmpty("profile has no samples with moderate slope")
    r = profile.r[ok]
    return float(r[0]), float(r[-1])


def _s_grid(profile: ProfileSolution, spec: TessellationSpec) -> np.ndarray:
    lo, hi = spec.s_range if spec.s_range is not None else _default_s_range(profile)
    lo, hi = max(lo, profile.r[0]), min(hi, profile.r[-1])
    if not lo < hi:
        raise DomainEmpty("s_range does not meet the profile's sampled interval")
    return np.linspace(lo, hi, spec.resolution[0])


def _reject_straight(s: np.ndarray, up: np.ndarray) -> None:
    # measured on the mesh samples, not from the equation the profile claims to solve
    kappa = np.gradient(up, s)
    if np.any(np.abs(kappa) <= 1e-12):
        raise ConfigError("profile has zero-curvature samples; lines give no singular maximal surface")


def translation_surface(profile: ProfileSolution, spec: Optional[TessellationSpec] = None) -> SurfaceMesh:
    """Cylinder ``(s, t, u(s))`` over a translation profile."""
    spec = spec or TessellationSpec()
    s = _s_grid(profile, spec)
    u, up = _profile_values(profile, s)
    _reject_straight(s, up)

    def X(S, T):
        return np.stack([S, T, np.broadcast_to(u[:, None], S.shape)], axis=-1)

    return _mesh_from_grid(_sweep(X, s, spec.t_range, spec.resolution[1]))


def rotate_x_axis(profile: ProfileSolution, spec: Optional[TessellationSpec] = None) -> SurfaceMesh:
    """Hyperbolic rotation ``(s, u sinh t, u cosh t)`` of a profile curve."""
    spec = spec or TessellationSpec()
    s = _s_grid(profile, spec)
    u, _ = _profile_values(profile, s)
    return _mesh_from_grid(_sweep(_hyperbolic_rotation(u), s, spec.t_range, spec.resolution[1]))


def _hyperbolic_rotation(u: np.ndarray):
    def X(S, T):
        U = u[:, None]
        return np.stack([S, U * np.sinh(T), U * np.cosh(T)], axis=-1)
    return X


def rotate_z_axis(profile: ProfileSolution, spec: Optional[TessellationSpec] = None) -> SurfaceMesh:
    """Surface of revolution ``(s cos t, s sin t, u(s))`` about the z-axis.

    If the radial range starts at ``s = 0`` the first ring collapses to a
    single apex vertex joined to the next ring by a triangle fan.
    """
    spec = spec or TessellationSpec()
    s = _s_grid(profile, spec)
    if s[0] < 0:
        raise DomainEmpty("radial range must be nonnegative")
    u, _ = _profile_values(profile, s)

    def X(S, T):
        return np.stack([S * np.cos(T), S * np.sin(T), np.broadcast_to(u[:, None], S.shape)], axis=-1)

    P = _sweep(X, s, (0.0, 2 * math.pi), spec.resolution[1], periodic=True)
    nt = P.shape[1]
    if s[0] > 0:
        return _mesh_from_grid(P, periodic_t=True)
    ring = P[1:]
    tris = grid_triangles(ring, periodic_t=True) + 1
    j = np.arange(nt)
    fan = np.stack([np.zeros(nt, dtype=np.int64), j + 1, (j + 1) % nt + 1], axis=1)
    verts = np.concatenate([[[0.0, 0.0, u[0]]], ring.reshape(-1, 3)])
    return SurfaceMesh(verts, np.concatenate([fan, tris]))


def lightlike_profile(alpha: float, m: float):
    """Closed-form profile ``u(s)`` of the null-rotation family and its branch.

    Returns ``(u, up, sign)`` where ``sign`` is the sign of admissible ``s``.
    ``alpha < 3/2``: ``u = m s^(3-2 alpha)/(3-2 alpha)`` on ``s > 0``;
    ``alpha = 3/2``: ``u = m log s`` on ``s > 1``;
    ``alpha > 3/2``: ``u = m |s|^(3-2 alpha)/(2 alpha-3)`` on ``s < 0``.
    All branches solve ``s u'' = 2(1 - alpha) u'`` with ``u' > 0``.
    """
    if not m > 0:
        raise ConfigError("m must be positive")
    if alpha == 1.5:
        return (lambda s: m * np.log(s)), (lambda s: m / s), +1
    p = 3.0 - 2.0 * alpha
    if p > 0:
        return (lambda s: m * s**p / p), (lambda s: m * s ** (p - 1)), +1
    return (lambda s: m * np.abs(s) ** p / -p), (lambda s: m * np.abs(s) ** (p - 1)), -1


def lightlike_point(s, t, u):
    return np.stack([u + s - t * t * s, -2.0 * t * s, u - s - t * t * s], axis=-1)


def lightlike_surface(alpha: float, m: float, spec: Optional[TessellationSpec] = None) -> SurfaceMesh:
    """Surface swept by null rotations about the axis spanned by ``(1, 0, 1)``.

    The s-range is clipped to the largest interval on which ``u > 0``,
    ``u' > 0`` and the whole orbit arc over ``spec.t_range`` stays in
    ``z > 0``.
    """
    spec = spec or TessellationSpec()
    u, up, sign = lightlike_profile(alpha, m)
    if spec.s_range is None:
        s_range = (0.5, 2.0) if sign > 0 else (-1.0, -0.5)
    else:
        s_range = spec.s_range
    lo, hi = s_range
    lo, hi = (max(lo, 0.0), hi) if sign > 0 else (lo, min(hi, 0.0))
    if not lo < hi:
        raise DomainEmpty("s_range misses the branch of admissible s")
    cand = np.linspace(lo, hi, 4001)[1:-1] if (lo == 0.0 or hi == 0.0) else np.linspace(lo, hi, 4001)
    T = max(abs(spec.t_range[0]), abs(spec.t_range[1]))
    with np.errstate(divide="ignore", invalid="ignore"):
        uc, upc = u(cand), up(cand)
        # z = u - s (1 + t^2): worst case at |t| = T for s > 0, at t = 0 for s < 0
        zmin = uc - cand * (1.0 + T * T) if sign > 0 else uc - cand
    ok = (uc > 0) & (upc > 0) & (zmin > 0) & np.isfinite(uc)
    if not np.any(ok):
        raise DomainEmpty(f"no s with u > 0, u' > 0 and z > 0 for alpha={alpha}, m={m}")
    # largest run of consecutive admissible samples
    edges = np.flatnonzero(np.diff(np.concatenate([[0], ok.astype(int), [0]])))
    starts, stops = edges[::2], edges[1::2]
    i = int(np.argmax(stops - starts))
    s = np.linspace(cand[starts[i]], cand[stops[i] - 1], spec.resolution[0])
    P = _sweep(lambda S, TT: lightlike_point(S, TT, u(S)), s, spec.t_range, spec.resolution[1])
    return _mesh_from_grid(P)


def canonical_surface(kind: str, param: float, spec: Optional[TessellationSpec] = None) -> SurfaceMesh:
    """Exact meshes: ``hyperbolic_plane`` (radius ``param``, as a graph over a
    square), ``hyperbolic_catenoid`` (``u = sin(param x)/param`` rotated about
    the x-axis) and ``cone`` (``z = sqrt(param) r`` on an annulus).

    The cone is spacelike only for ``param < 1``; steeper cones are returned
    unvalidated so their vertices can still be inspected.
    """
    spec = spec or TessellationSpec()
    ns, nt = spec.resolution
    if kind == "hyperbolic_plane":
        if not param > 0:
            raise ConfigError("radius must be positive")
        lo, hi = spec.s_range or (-1.0, 1.0)
        y0, y1 = spec.t_range if spec.s_range is not None else (lo, hi)
        X, Y = np.meshgrid(np.linspace(lo, hi, ns), np.linspace(y0, y1, nt or ns), indexing="ij")
        Z = np.sqrt(param * param + X * X + Y * Y)
        return _mesh_from_grid(np.stack([X, Y, Z], axis=-1))
    if kind == "hyperbolic_catenoid":
        if param == 0:
            raise ConfigError("a must be nonzero")
        a = abs(param)
        lo, hi = spec.s_range or ((math.pi / 2 - 1.0) / a, (math.pi / 2 + 1.0) / a)
        s = np.linspace(lo, hi, ns)
        u = np.sin(a * s) / a
        if np.any(u <= 0):
            raise DomainEmpty("s_range leaves the arch where sin(a s) > 0")
        return _mesh_from_grid(_sweep(_hyperbolic_rotation(u), s, spec.t_range, nt))
    if kind == "cone":
        if not param > 0:
            raise ConfigError("cone parameter must be positive")
        lo, hi = spec.s_range or (0.5, 2.0)
        if not lo > 0:
            raise DomainEmpty("cone annulus must avoid the apex")
        c = math.sqrt(param)

        def X(R, T):
            return np.stack([R * np.cos(T), R * np.sin(T), c * R], axis=-1)

        P = _sweep(X, np.linspace(lo, hi, ns), (0.0, 2 * math.pi), nt, periodic=True)
        return _mesh_from_grid(P, periodic_t=True, check=param < 1)
    raise ConfigError(f"unknown canonical surface {kind!r}")


@dataclass(frozen=True)
class TranslateHorizontal:
    v: Sequence[float]


@dataclass(frozen=True)
class RotateZ:
    theta: float


@dataclass(frozen=True)
class Dilate:
    lam: float
    p0: Sequence[float] = (0.0, 0.0, 0.0)


def transform(mesh: SurfaceMesh, op) -> SurfaceMesh:
    """Apply a symmetry of the surface equation with axis ``(0, 0, 1)``.

    Horizontal translations, rotations about vertical lines through the
    origin, and dilations centred in the plane ``z = 0``.
    """
    V = mesh.vertices
    if isinstance(op, TranslateHorizontal):
        v = np.asarray(op.v, dtype=float)
        if v.shape != (3,) or v[2] != 0:
            raise InvalidTransform("translation vector must be horizontal")
        W = V + v
    elif isinstance(op, RotateZ):
        c, s = math.cos(op.theta), math.sin(op.theta)
        W = V @ np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
    elif isinstance(op, Dilate):
        p0 = np.asarray(op.p0, dtype=float)
        if p0.shape != (3,) or p0[2] != 0:
            raise InvalidTransform("dilation centre must lie in the plane z = 0")
        if not op.lam > 0:
            raise InvalidTransform("dilation factor must be positive")
        W = p0 + op.lam * (V - p0)
    else:
        raise InvalidTransform(f"unsupported transform {op!r}")
    return mesh.copy_with(W)
