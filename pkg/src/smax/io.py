"""Deterministic text artifacts: CSV tables, OBJ meshes and JSON reports.

Floats are written with 17 significant digits so every value round-trips
exactly; JSON keys are sorted. Every CSV starts with a ``# meta:`` line
holding a compact JSON object.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .lorentz import SurfaceMesh
from .profile import ProfileSolution


def fmt(x) -> str:
    return format(float(x), ".17g")


def _encode(obj, indent: Optional[int], level: int) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    colon = ":" if indent is None else ": "
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k), ensure_ascii=False) + colon + _encode(obj[k], indent, level + 1)
                 for k in sorted(obj, key=str)]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in obj]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: Optional[int] = None) -> str:
    """JSON with sorted keys, 17-digit floats and ``null`` for non-finite values."""
    return _encode(obj, indent, 0)


def emit_report(report, path) -> Path:
    """Write a report (anything with ``to_dict()`` or a dict) as stable JSON."""
    data = report.to_dict() if hasattr(report, "to_dict") else report
    path = Path(path)
    path.write_text(dumps(data) + "\n", encoding="utf-8")
    return path


def meta_line(meta: dict) -> str:
    return "# meta: " + dumps(meta)


def write_csv(path, header: Iterable[str], columns: Iterable, meta: dict) -> Path:
    cols = [np.asarray(c) for c in columns]
    lines = [meta_line(meta), ",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(str(int(v)) if np.issubdtype(type(v), np.integer) else fmt(v)
                              for v in row))
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[dict, list[str], np.ndarray]:
    """Inverse of :func:`write_csv`: ``(meta, header, rows)``."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("# meta: "):
            raise ValueError("missing '# meta:' line")
        meta = json.loads(first[len("# meta: "):])
        header = fh.readline().strip().split(",")
        rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    return meta, header, rows


def _endpoint(e) -> dict:
    return {"r": e.r, "tag": e.tag, "u": e.u, "up": e.up}


def profile_meta(sol: ProfileSolution, command: str, **extra) -> dict:
    return {"command": command, "alpha": sol.alpha, "axis_kind": sol.axis_kind,
            "dim_n": sol.dim_n, "left": _endpoint(sol.left), "right": _endpoint(sol.right), **extra}


def write_profile_csv(sol: ProfileSolution, path, command: str = "profile", **extra) -> Path:
    return write_csv(path, ["r", "u", "uprime"], [sol.r, sol.u, sol.up],
                     profile_meta(sol, command, **extra))


def write_obj(mesh: SurfaceMesh, path) -> Path:
    """ASCII OBJ with ``v`` and 1-based ``f`` records."""
    lines = [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles]
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_obj(path) -> tuple[np.ndarray, np.ndarray]:
    verts, faces = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return np.array(verts), np.array(faces, dtype=np.int64)


def write_channels_csv(mesh: SurfaceMesh, path, meta: dict) -> Path:
    names = sorted(mesh.channels)
    cols = [np.arange(mesh.n_vertices)] + [mesh.channels[n] for n in names]
    return write_csv(path, ["vertex"] + names, cols, meta)


def graph_mesh(values: np.ndarray, x: np.ndarray, y: np.ndarray) -> SurfaceMesh:
    """Triangulated graph of grid values (quads split along the same diagonal)."""
    X, Y = np.meshgrid(x, y, indexing="ij")
    nx, ny = X.shape
    idx = np.arange(nx * ny).reshape(nx, ny)
    a, b = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel()
    c, d = idx[1:, 1:].ravel(), idx[:-1, 1:].ravel()
    tris = np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])
    verts = np.stack([X.ravel(), Y.ravel(), np.asarray(values, dtype=float).ravel()], axis=1)
    return SurfaceMesh(verts, tris, check=False)
