"""Lorentz-Minkowski 3-space: metric, causal character, and curvature oracles.

Vectors are plain ``numpy`` arrays whose last axis has length 3 and holds
``(x, y, z)``; the metric is ``dx^2 + dy^2 - dz^2`` so the z-axis is timelike.
All functions broadcast over leading axes.

The two residual evaluators in this module are the correctness oracles used by
every other part of the package:

* :func:`graph_Q_residual` evaluates the quasilinear operator of the graph
  equation pointwise from exact or tabulated derivatives;
* :func:`eqL_residual` evaluates ``H - alpha <N, a> / <p, a>`` on a triangle
  mesh, with ``H`` and ``N`` estimated by local quadric fitting.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DegenerateStar,
    DenominatorZero,
    HalfspaceViolation,
    PositivityViolation,
    SpacelikeViolation,
)

ETA = np.array([1.0, 1.0, -1.0])
TIME_AXIS = np.array([0.0, 0.0, 1.0])


class LVec3(NamedTuple):
    """A point or vector of L^3."""

    x: float
    y: float
    z: float

    def __array__(self, dtype=None, copy=None):
        return np.array((self.x, self.y, self.z), dtype=dtype or float)


class Causal(str, enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    ZERO = "zero"


def minkowski_dot(u, v):
    """``u_x v_x + u_y v_y - u_z v_z``, broadcast over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def causal_character(v) -> Causal:
    """Classify ``v`` by the exact sign of ``<v, v>``.

    No tolerance is applied; callers wanting one should test
    ``abs(minkowski_dot(v, v)) < eps`` themselves.
    """
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return Causal.ZERO
    q = float(minkowski_dot(v, v))
    if q > 0:
        return Causal.SPACELIKE
    if q < 0:
        return Causal.TIMELIKE
    return Causal.LIGHTLIKE


def lorentz_cross(u, v):
    """Lorentzian cross product: the vector ``w`` with ``<w, t> = det(u, v, t)``."""
    c = np.cross(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return c * ETA


def normalize_timelike(n):
    """Scale timelike vectors to unit length and make them future-pointing."""
    n = np.asarray(n, dtype=float)
    q = minkowski_dot(n, n)
    if np.any(q >= 0):
        raise SpacelikeViolation("normal is not timelike")
    n = n / np.sqrt(-q)[..., None]
    return np.where(n[..., 2:3] < 0, -n, n)


# --------------------------------------------------------------------------
# graphs z = u(x, y)


@dataclass
class GraphSample:
    """Values and derivatives of a graph ``z = u(x, y)`` at sample points.

    Arrays share one shape. ``h`` is the sample spacing (informational when the
    derivatives are exact).
    """

    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    ux: np.ndarray
    uy: np.ndarray
    uxx: np.ndarray
    uxy: np.ndarray
    uyy: np.ndarray
    h: float = 0.0

    @classmethod
    def from_function(
        cls,
        func: Callable[[np.ndarray, np.ndarray], tuple],
        x_range: tuple[float, float],
        y_range: tuple[float, float],
        h: float,
    ) -> "GraphSample":
        """Sample ``func(x, y) -> (u, ux, uy, uxx, uxy, uyy)`` on a uniform grid."""
        xs = np.arange(x_range[0], x_range[1] + 0.5 * h, h)
        ys = np.arange(y_range[0], y_range[1] + 0.5 * h, h)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        vals = [np.broadcast_to(np.asarray(a, dtype=float), X.shape) for a in func(X, Y)]
        return cls(X, Y, *vals, h=h)

    @classmethod
    def from_grid(cls, values: np.ndarray, x0: float, y0: float, h: float) -> "GraphSample":
        """Central-difference derivatives of tabulated ``values[i, j] = u(x0+ih, y0+jh)``.

        Only interior nodes are returned.
        """
        U = np.asarray(values, dtype=float)
        c = U[1:-1, 1:-1]
        ux = (U[2:, 1:-1] - U[:-2, 1:-1]) / (2 * h)
        uy = (U[1:-1, 2:] - U[1:-1, :-2]) / (2 * h)
        uxx = (U[2:, 1:-1] - 2 * c + U[:-2, 1:-1]) / h**2
        uyy = (U[1:-1, 2:] - 2 * c + U[1:-1, :-2]) / h**2
        uxy = (U[2:, 2:] - U[2:, :-2] - U[:-2, 2:] + U[:-2, :-2]) / (4 * h**2)
        i = np.arange(1, U.shape[0] - 1)
        j = np.arange(1, U.shape[1] - 1)
        X, Y = np.meshgrid(x0 + i * h, y0 + j * h, indexing="ij")
        return cls(X, Y, c, ux, uy, uxx, uxy, uyy, h=h)


def q_operator(u, ux, uy, uxx, uxy, uyy, alpha: float, t: float = 1.0):
    """``(1-|Du|^2) Lap u + u_i u_j u_ij - alpha t (1-|Du|^2) / u``."""
    w2 = 1.0 - ux * ux - uy * uy
    return (1.0 - uy * uy) * uxx + (1.0 - ux * ux) * uyy + 2.0 * ux * uy * uxy - alpha * t * w2 / u


def graph_Q_residual(g: GraphSample, alpha: float, t: float = 1.0) -> np.ndarray:
    """Pointwise residual of the graph equation with the source scaled by ``t``.

    ``t = 1`` is the singular maximal surface equation, ``t = 0`` the maximal
    surface equation.
    """
    if np.any(g.ux**2 + g.uy**2 >= 1.0):
        raise SpacelikeViolation("|Du| >= 1 at some sample")
    if np.any(g.u <= 0):
        raise PositivityViolation("u <= 0 at some sample")
    return q_operator(g.u, g.ux, g.uy, g.uxx, g.uxy, g.uyy, alpha, t)


def graph_mean_curvature(ux, uy, uxx, uxy, uyy):
    """Mean curvature of a spacelike graph w.r.t. the future normal ``(Du, 1)/W``."""
    w2 = 1.0 - ux * ux - uy * uy
    return ((1.0 - uy * uy) * uxx + (1.0 - ux * ux) * uyy + 2.0 * ux * uy * uxy) / w2**1.5


# --------------------------------------------------------------------------
# triangle meshes


@dataclass
class SurfaceMesh:
    """Triangulated spacelike surface in the halfspace ``z > 0``.

    ``channels`` holds per-vertex scalar fields (``H``, residuals, ...).
    Construction validates the halfspace and spacelike-edge invariants unless
    ``check=False``; :meth:`validate` can be called later.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    channels: dict = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.ascontiguousarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if self.check:
            self.validate()

    def validate(self) -> None:
        if np.any(self.vertices[:, 2] <= 0):
            raise HalfspaceViolation("vertex with z <= 0")
        e = self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
        if np.any(minkowski_dot(e, e) <= 0):
            raise SpacelikeViolation("mesh has a non-spacelike edge")

    def is_spacelike(self) -> bool:
        e = self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
        return bool(np.all(minkowski_dot(e, e) > 0))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def edges(self) -> np.ndarray:
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    @cached_property
    def boundary_vertices(self) -> np.ndarray:
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e.sort(axis=1)
        uniq, counts = np.unique(e, axis=0, return_counts=True)
        return np.unique(uniq[counts == 1])

    @cached_property
    def interior_mask(self) -> np.ndarray:
        mask = np.ones(self.n_vertices, dtype=bool)
        mask[self.boundary_vertices] = False
        return mask

    def deep_interior_mask(self, depth: int = 2) -> np.ndarray:
        """Vertices at graph distance at least ``depth`` from the boundary."""
        mask = self.interior_mask.copy()
        front = set(self.boundary_vertices.tolist())
        for _ in range(depth - 1):
            nxt = set()
            for v in front:
                nxt.update(self.neighbors[v].tolist())
            mask[list(nxt)] = False
            front = nxt
        return mask

    @cached_property
    def neighbors(self) -> list[np.ndarray]:
        nbrs: list[set] = [set() for _ in range(self.n_vertices)]
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return [np.array(sorted(s), dtype=np.int64) for s in nbrs]

    def ring(self, i: int, depth: int = 2) -> np.ndarray:
        seen = {i}
        front = {i}
        for _ in range(depth):
            nxt = set()
            for v in front:
                nxt.update(self.neighbors[v].tolist())
            front = nxt - seen
            seen |= nxt
        seen.discard(i)
        return np.array(sorted(seen), dtype=np.int64)

    def face_normals(self) -> np.ndarray:
        v = self.vertices
        t = self.triangles
        return lorentz_cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])

    @cached_property
    def _geometry(self) -> tuple[np.ndarray, np.ndarray]:
        return _fit_vertex_geometry(self)

    @property
    def vertex_normals(self) -> np.ndarray:
        """Unit future-pointing normals from the local quadric fit."""
        return self._geometry[1]

    def copy_with(self, vertices: np.ndarray) -> "SurfaceMesh":
        return SurfaceMesh(vertices, self.triangles.copy(), {}, check=self.check)


def _initial_normals(mesh: SurfaceMesh) -> np.ndarray:
    fn = mesh.face_normals()
    # area-weighted: |lorentz_cross| is twice the induced area of a spacelike face
    fn = np.where(fn[:, 2:3] < 0, -fn, fn)
    acc = np.zeros_like(mesh.vertices)
    for k in range(3):
        np.add.at(acc, mesh.triangles[:, k], fn)
    return normalize_timelike(acc)


def _frame(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spacelike orthonormal tangent vectors completing the unit timelike ``n``."""
    ref = np.zeros_like(n)
    use_y = np.abs(n[:, 0]) > np.abs(n[:, 1])
    ref[~use_y, 0] = 1.0
    ref[use_y, 1] = 1.0
    e1 = ref + minkowski_dot(ref, n)[:, None] * n
    e1 /= np.sqrt(minkowski_dot(e1, e1))[:, None]
    e2 = lorentz_cross(n, e1)
    e2 /= np.sqrt(minkowski_dot(e2, e2))[:, None]
    return e1, e2


def _fit_vertex_geometry(mesh: SurfaceMesh, passes: int = 2) -> tuple[np.ndarray, np.ndarray]:
    nv = mesh.n_vertices
    interior = mesh.interior_mask
    for i, nb in enumerate(mesh.neighbors):
        # boundary corners may have two neighbours; their 2-ring still fits
        if len(nb) < 3 and (interior[i] or len(mesh.ring(i, 2)) < 5):
            raise DegenerateStar(f"vertex {i} has {len(nb)} neighbours")
    rings = [mesh.ring(i, 2) for i in range(nv)]
    kmax = max(len(r) for r in rings)
    idx = np.zeros((nv, kmax), dtype=np.int64)
    mask = np.zeros((nv, kmax), dtype=bool)
    for i, r in enumerate(rings):
        idx[i, : len(r)] = r
        mask[i, : len(r)] = True
        idx[i, len(r):] = i
    q = mesh.vertices[idx] - mesh.vertices[:, None, :]
    scale = np.sqrt(np.max(np.where(mask, np.abs(minkowski_dot(q, q)), 0.0), axis=1))
    q = q / scale[:, None, None]

    # cubic terms absorb the O(h) bias of one-sided rings; small rings fall back to quadrics
    cubic = mask.sum(axis=1) >= 12
    n = _initial_normals(mesh)
    H = np.zeros(nv)
    for _ in range(passes):
        e1, e2 = _frame(n)
        x = minkowski_dot(q, e1[:, None, :])
        y = minkowski_dot(q, e2[:, None, :])
        f = -minkowski_dot(q, n[:, None, :]) * mask
        cols = [x, y, x * x, x * y, y * y, x**3, x * x * y, x * y * y, y**3]
        coef = np.zeros((nv, 5))
        for sel, ncol in ((cubic, 9), (~cubic, 5)):
            if not np.any(sel):
                continue
            M = np.stack(cols[:ncol], axis=-1)[sel] * mask[sel][..., None]
            Qm, R = np.linalg.qr(M)
            diag = np.abs(np.diagonal(R, axis1=1, axis2=2))
            weak = np.any(diag < 1e-10 * diag.max(axis=1, keepdims=True), axis=1)
            if np.any(weak):
                bad = int(np.flatnonzero(sel)[np.argmax(weak)])
                raise DegenerateStar(f"quadric fit is rank deficient at vertex {bad}")
            rhs = np.einsum("nki,nk->ni", Qm, f[sel])
            coef[sel] = np.linalg.solve(R, rhs[..., None])[..., 0][:, :5]
        D, E, A, B, C = coef.T
        w2 = 1.0 - D * D - E * E
        if np.any(w2 <= 0):
            raise SpacelikeViolation("fitted tangent plane is not spacelike")
        w = np.sqrt(w2)
        H = ((1.0 - E * E) * 2 * A + 2 * D * E * B + (1.0 - D * D) * 2 * C) / w2**1.5 / scale
        n = normalize_timelike((D[:, None] * e1 + E[:, None] * e2 + n) / w[:, None])
    return H, n


def mesh_mean_curvature(mesh: SurfaceMesh) -> np.ndarray:
    """Per-vertex mean curvature (sum of principal curvatures, future normal).

    Estimated by a least-squares polynomial fit (cubic where the 2-ring is
    large enough, quadric otherwise) in Lorentzian normal coordinates, with
    the normal refined from the fit twice.
    """
    H = mesh._geometry[0]
    mesh.channels["H"] = H
    return H


def eqL_residual(mesh: SurfaceMesh, alpha: float, a_vec=TIME_AXIS) -> np.ndarray:
    """Per-vertex ``H - alpha <N, a> / <p, a>``."""
    a_vec = np.asarray(a_vec, dtype=float)
    p = mesh.vertices
    den = minkowski_dot(p, a_vec)
    if np.any(np.abs(den) <= 1e-12 * (1.0 + np.linalg.norm(p, axis=1))):
        raise DenominatorZero("<p, a> vanishes at some vertex")
    H, N = mesh._geometry
    res = H - alpha * minkowski_dot(N, a_vec) / den
    mesh.channels["H"] = H
    mesh.channels["residual"] = res
    return res
