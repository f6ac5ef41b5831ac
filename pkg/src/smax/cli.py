"""Command line: ``smax {profile,rotational,surface,dirichlet,verify}``.

Each command writes its artifacts to ``--out`` (CSV/OBJ/JSON) and prints one
PASS/FAIL line per check. Exit status: 0 when every check passes, 1 on bad
input, 2 on a solver failure, 3 when a check fails.
"""

from __future__ import annotations

import argparse
import ast
import math
import operator
import sys
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import io
from .dirichlet import (DirichletOptions, GridField, RectDomain, boundary_values, solve_dirichlet)
from .errors import ConfigError, InvalidInitial, SolverError
from .lorentz import TIME_AXIS, eqL_residual, mesh_mean_curvature
from .profile import Check, classify_profile, first_integral_mu, solve_profile_1d
from .rotational import classify_rotational, solve_from_interior, solve_rotational
from . import surfaces

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_CHECK = 0, 1, 2, 3

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"cos": np.cos, "sin": np.sin, "sqrt": np.sqrt}


def parse_expression(text: str) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Compile an expression in ``x``, ``y`` using ``+ - * /``, numbers and
    ``cos``, ``sin``, ``sqrt`` into a vectorized function."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}") from None

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            v = float(node.value)
            return lambda x, y: v
        if isinstance(node, ast.Name) and node.id in ("x", "y"):
            return (lambda x, y: x) if node.id == "x" else (lambda x, y: y)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op, a, b = _BINOPS[type(node.op)], build(node.left), build(node.right)
            return lambda x, y: op(a(x, y), b(x, y))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            op, a = _UNARY[type(node.op)], build(node.operand)
            return lambda x, y: op(a(x, y))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            fn, a = _FUNCS[node.func.id], build(node.args[0])
            return lambda x, y: fn(a(x, y))
        raise ConfigError(f"unsupported element {ast.dump(node)[:40]!r} in {text!r}")

    f = build(tree)

    def func(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.broadcast_to(f(x, y), np.broadcast(x, y).shape).astype(float)

    return func


def boundary_from_table(path, dom: RectDomain) -> np.ndarray:
    """Boundary values from a CSV of ``x,y,phi`` samples at the boundary nodes."""
    try:
        table = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read boundary table {path}: {exc}") from None
    if table.shape[1] != 3:
        raise ConfigError("boundary table needs three columns x,y,phi")
    vals = np.full(dom.shape, np.nan)
    i = np.rint((table[:, 0] - dom.x_range[0]) / dom.h).astype(int)
    j = np.rint((table[:, 1] - dom.y_range[0]) / dom.h).astype(int)
    ok = (i >= 0) & (i < dom.nx) & (j >= 0) & (j < dom.ny)
    if not ok.all() or np.any(np.abs(dom.x[i] - table[:, 0]) > 1e-9) or np.any(np.abs(dom.y[j] - table[:, 1]) > 1e-9):
        raise ConfigError("boundary table has samples off the grid nodes")
    vals[i, j] = table[:, 2]
    if np.any(np.isnan(vals[dom.boundary_mask])):
        raise ConfigError("boundary table misses some boundary nodes")
    return vals


def _phi_spec(args, dom: RectDomain):
    if args.phi_table:
        vals = boundary_from_table(args.phi_table, dom)

        def table_phi(x, y, _v=vals):
            return _v
        return table_phi, f"table:{args.phi_table}"
    try:
        return float(args.phi), args.phi
    except ValueError:
        return parse_expression(args.phi), args.phi


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="smax", description="Singular maximal surfaces: solvers and checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out(sp):
        sp.add_argument("--out", default=".", help="output directory")

    sp = sub.add_parser("profile", help="translation profile through a point on r = 0")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--up0", type=float, default=0.0)
    out(sp)

    sp = sub.add_parser("rotational", help="rotational profile about the timelike axis")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--up0", type=float, default=0.0)
    sp.add_argument("--r0", type=float, default=0.0, help="start radius (0 = on the axis)")
    sp.add_argument("--n-dim", type=int, default=2)
    out(sp)

    sp = sub.add_parser("surface", help="mesh of an invariant or canonical surface")
    sp.add_argument("--kind", required=True,
                    choices=["translation", "rotate-x", "rotate-z", "lightlike",
                             "hyperbolic-plane", "hyperbolic-catenoid", "cone"])
    sp.add_argument("--alpha", type=float, help="profile parameter (translation, rotate-x, rotate-z, lightlike)")
    sp.add_argument("--u0", type=float, default=1.0)
    sp.add_argument("--param", type=float, default=1.0, help="r, a, alpha or m depending on --kind")
    sp.add_argument("--resolution", type=int, default=41)
    sp.add_argument("--tol", type=float, default=5e-2)
    out(sp)

    sp = sub.add_parser("dirichlet", help="Dirichlet problem on a rectangle")
    sp.add_argument("--rect", type=float, nargs=4, metavar=("X0", "X1", "Y0", "Y1"), required=True)
    sp.add_argument("--phi", default="1", help="constant or expression in x, y")
    sp.add_argument("--phi-table", help="CSV with x,y,phi at the boundary nodes")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-10, help="Newton residual tolerance")
    sp.add_argument("--exact", help="exact solution to compare with (expression)")
    sp.add_argument("--exact-tol", type=float, default=5e-3)
    sp.add_argument("--threads", type=int)
    out(sp)

    sp = sub.add_parser("verify", help="run a suite of closed-form checks")
    sp.add_argument("--suite", choices=["canonical"], default="canonical")
    out(sp)
    return p


def _print_checks(checks: dict) -> bool:
    for name, c in checks.items():
        print(f"{'PASS' if c.passed else 'FAIL'} {name}: {c.value:.6g} {c.note}".rstrip())
    return all(c.passed for c in checks.values())


def _checks_dict(checks: dict) -> dict:
    return {k: {"status": "pass" if c.passed else "fail", "value": c.value,
                **({"note": c.note} if c.note else {})} for k, c in checks.items()}


def cmd_profile(args, outdir: Path) -> dict:
    sol = solve_profile_1d(args.alpha, args.u0, args.up0)
    mu, drift = first_integral_mu(sol)
    checks = {"first_integral_drift": Check(drift <= 1e-7, drift)}
    if args.up0 == 0:
        checks.update(classify_profile(sol).checks)
    io.write_profile_csv(sol, outdir / "profile.csv",
                         tolerances={"drift": 1e-7, "slope": 2e-2, "height": 1e-4})
    report = {"command": "profile", "alpha": args.alpha, "u0": args.u0, "up0": args.up0,
              "domain": list(sol.domain), "left": io._endpoint(sol.left),
              "right": io._endpoint(sol.right), "mu": mu, "checks": _checks_dict(checks)}
    io.emit_report(report, outdir / "profile.json")
    return checks


def cmd_rotational(args, outdir: Path) -> dict:
    if args.r0 > 0:
        sol = solve_from_interior(args.alpha, args.r0, args.u0, args.up0, args.n_dim)
    else:
        sol = solve_rotational(args.alpha, args.u0, args.up0, args.n_dim)
    checks = {}
    try:
        rc = classify_rotational(sol)
        checks["case_table"] = Check(True, 1.0, f"{rc.start}: {','.join(sorted(rc.features))}")
        cls = {"alpha_sign": rc.alpha_sign, "start": rc.start, "features": sorted(rc.features)}
    except SolverError as exc:
        checks["case_table"] = Check(False, 0.0, str(exc))
        cls = None
    io.write_profile_csv(sol, outdir / "rotational.csv", command="rotational",
                         tolerances={"slope": 2e-2, "height": 1e-4})
    report = {"command": "rotational", "alpha": args.alpha, "u0": args.u0, "up0": args.up0,
              "r0": args.r0, "n_dim": args.n_dim, "domain": list(sol.domain),
              "left": io._endpoint(sol.left), "right": io._endpoint(sol.right),
              "classification": cls, "checks": _checks_dict(checks)}
    io.emit_report(report, outdir / "rotational.json")
    return checks


def _surface_mesh(args):
    spec = surfaces.TessellationSpec(resolution=(args.resolution, None))
    k = args.kind
    if k in ("translation", "rotate-x", "rotate-z", "lightlike") and args.alpha is None:
        raise ConfigError(f"--alpha is required for --kind {k}")
    if k == "translation":
        return surfaces.translation_surface(solve_profile_1d(args.alpha, args.u0), spec), args.alpha
    if k == "rotate-x":
        return surfaces.rotate_x_axis(solve_profile_1d(args.alpha, args.u0), spec), args.alpha + 1
    if k == "rotate-z":
        return surfaces.rotate_z_axis(solve_rotational(args.alpha, args.u0), spec), args.alpha
    if k == "lightlike":
        return surfaces.lightlike_surface(args.alpha, args.param, spec), args.alpha
    name = k.replace("-", "_")
    if name == "hyperbolic_plane":
        return surfaces.canonical_surface(name, args.param, spec), 2.0
    if name == "hyperbolic_catenoid":
        return surfaces.canonical_surface(name, args.param, spec), 0.0
    if not args.param < 1:
        raise ConfigError("cone meshes are spacelike only for param < 1")
    return surfaces.canonical_surface(name, args.param, spec), args.param


def cmd_surface(args, outdir: Path) -> dict:
    mesh, alpha = _surface_mesh(args)
    res = eqL_residual(mesh, alpha, TIME_AXIS)
    mesh_mean_curvature(mesh)
    deep = mesh.deep_interior_mask()
    worst = float(np.max(np.abs(res[deep]))) if deep.any() else math.inf
    checks = {"eqL_residual": Check(worst <= args.tol, worst, f"alpha={alpha:g}")}
    meta = {"command": "surface", "kind": args.kind, "alpha": alpha, "tolerances": {"residual": args.tol}}
    io.write_obj(mesh, outdir / "surface.obj")
    io.write_channels_csv(mesh, outdir / "surface_channels.csv", meta)
    io.emit_report({**meta, "vertices": mesh.n_vertices, "triangles": len(mesh.triangles),
                    "checks": _checks_dict(checks)}, outdir / "surface.json")
    return checks


def cmd_dirichlet(args, outdir: Path) -> dict:
    x0, x1, y0, y1 = args.rect
    dom = RectDomain((x0, x1), (y0, y1), args.h)
    phi, phi_text = _phi_spec(args, dom)
    opts = DirichletOptions(tol=args.tol, threads=args.threads)
    u, trace, report = solve_dirichlet(dom, phi, args.alpha, opts)
    if args.exact:
        X, Y = dom.mesh()
        err = float(np.max(np.abs(u.values - parse_expression(args.exact)(X, Y))))
        report.checks["exact_error"] = Check(err <= args.exact_tol, err)
    X, Y = dom.mesh()
    meta = {"command": "dirichlet", "alpha": args.alpha, "h": args.h, "phi": phi_text,
            "rect": [x0, x1, y0, y1], "tolerances": {"newton": args.tol, "exact": args.exact_tol}}
    io.write_csv(outdir / "dirichlet.csv", ["x", "y", "u"], [X.ravel(), Y.ravel(), u.values.ravel()], meta)
    io.write_obj(io.graph_mesh(u.values, dom.x, dom.y), outdir / "dirichlet.obj")
    data = report.to_dict()
    data["trace"] = [vars(s) for s in trace.steps]
    data["meta"] = meta
    io.emit_report(data, outdir / "dirichlet.json")
    return report.checks


def cmd_verify(args, outdir: Path) -> dict:
    from .verify import canonical_suite
    checks = canonical_suite()
    io.emit_report({"command": "verify", "suite": args.suite, "checks": _checks_dict(checks)},
                   outdir / "verify.json")
    return checks


COMMANDS = {"profile": cmd_profile, "rotational": cmd_rotational, "surface": cmd_surface,
            "dirichlet": cmd_dirichlet, "verify": cmd_verify}


def run(argv: Optional[list] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        checks = COMMANDS[args.command](args, outdir)
    except (ConfigError, InvalidInitial) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK if _print_checks(checks) else EXIT_CHECK


def main() -> None:
    sys.exit(run())
