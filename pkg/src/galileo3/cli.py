"""Command-line front end: scene files in, reports/meshes/tables out.

A scene is a JSON object selecting one surface family and its parameters::

    {
      "kind": "type1_2_standard",
      "parameters": {"variant": "type1", "f": "u^2", "g": "v^2"},
      "grid": [21, 21],
      "output": {"path": "report.json"}
    }

Expression strings use ``u`` for first-curve profiles (f, f1, f2, x, y, z)
and ``v`` for second-curve profiles (g, g1, g2).  Commands:

    galileo eval SCENE U V          curvature data at one point (JSON)
    galileo verify SCENE [...]      constancy report / certificate / probe
    galileo mesh SCENE --out F.obj  quad mesh of the surface
    galileo heatmap SCENE --out F.csv   per-node curvature table

Exit codes: 0 success/pass, 1 failed certificate or non-constant verdict,
2 scene or expression errors, 3 degenerate evaluation, 4 unwritable output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from . import expr as ex
from . import surfaces as sf
from . import translation as tr
from . import verify as vf
from .errors import (
    DegenerateSurfaceError,
    ExprError,
    ExprEvalError,
    GeometryError,
    InadmissibleError,
    SceneError,
    ValidationError,
)

__all__ = ["Scene", "scene_from_dict", "scene_from_path", "build_family", "main"]

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_BAD_SCENE = 2
EXIT_DEGENERATE = 3
EXIT_UNWRITABLE = 4

SCENE_KINDS = (
    "type1_2_standard",
    "affine",
    "type3",
    "type4",
    "constantK_type1",
    "cmc_cylinder_B_i",
    "cmc_cylinder_B_ii_1",
    "parabolic_ruled",
    "type3_circle",
    "type4_cmc_ode",
    "ruled_type_C",
)


@dataclass
class Scene:
    kind: str
    parameters: dict
    grid: tuple[int, int] | None = None
    tol: float | None = None
    output: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "parameters": self.parameters}
        if self.grid is not None:
            out["grid"] = list(self.grid)
        if self.tol is not None:
            out["tol"] = self.tol
        if self.output:
            out["output"] = self.output
        return out


def scene_from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    kind = data.get("kind")
    if kind not in SCENE_KINDS:
        raise SceneError(f"unknown scene kind {kind!r}; expected one of {SCENE_KINDS}")
    parameters = data.get("parameters")
    if not isinstance(parameters, dict):
        raise SceneError("scene needs a 'parameters' object")
    grid = data.get("grid")
    if grid is not None:
        if (
            not isinstance(grid, (list, tuple))
            or len(grid) != 2
            or not all(isinstance(n, int) and n >= 2 for n in grid)
        ):
            raise SceneError("'grid' must be two integers >= 2")
        grid = (grid[0], grid[1])
    tol = data.get("tol")
    if tol is not None and not (isinstance(tol, (int, float)) and tol > 0):
        raise SceneError("'tol' must be a positive number")
    output = data.get("output", {})
    if not isinstance(output, dict):
        raise SceneError("'output' must be an object")
    return Scene(kind, parameters, grid, tol, output)


def scene_from_path(path: str) -> Scene:
    try:
        with open(path, "rb") as fh:
            data = json.load(fh)
    except OSError as err:
        raise SceneError(f"cannot read scene file: {err}") from None
    except json.JSONDecodeError as err:
        raise SceneError(f"scene is not valid JSON: {err.msg} (byte offset {err.pos})") from None
    return scene_from_dict(data)


def _parse_expr(params: dict, key: str, variables: list[str], required: bool = True):
    source = params.get(key)
    if source is None:
        if required:
            raise SceneError(f"parameter {key!r} is required")
        return None
    if not isinstance(source, str):
        raise SceneError(f"parameter {key!r} must be an expression string")
    try:
        return ex.parse(source, variables)
    except ExprError as err:
        raise SceneError(f"parameter {key!r}: {err}") from None
    except ValueError as err:
        raise SceneError(f"parameter {key!r}: {err}") from None


def _number(params: dict, key: str, default=None):
    value = params.get(key, default)
    if value is None:
        raise SceneError(f"parameter {key!r} is required")
    if not isinstance(value, (int, float)):
        raise SceneError(f"parameter {key!r} must be a number")
    return float(value)


def _interval(params: dict, key: str, default):
    value = params.get(key)
    if value is None:
        return default
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise SceneError(f"parameter {key!r} must be [lo, hi]")
    return (float(value[0]), float(value[1]))


def _rectangle(params: dict, key: str, default):
    value = params.get(key)
    if value is None:
        return default
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise SceneError(f"parameter {key!r} must be [[ulo, uhi], [vlo, vhi]]")
    return (
        _interval({key: value[0]}, key, None),
        _interval({key: value[1]}, key, None),
    )


def _matrix(params: dict, key: str = "A", required: bool = True):
    value = params.get(key)
    if value is None:
        if required:
            raise SceneError(f"parameter {key!r} is required")
        return None
    try:
        (a11, a12), (a21, a22) = value
        return tr.AffineMatrix(float(a11), float(a12), float(a21), float(a22))
    except (TypeError, ValueError) as err:
        raise SceneError(f"parameter {key!r} must be a 2x2 matrix: {err}") from None


def build_family(scene: Scene) -> tr.SurfaceFamily:
    """Realize the scene's surface family (raises SceneError / ValidationError)."""
    p = scene.parameters
    kind = scene.kind
    if kind == "type1_2_standard":
        variant = p.get("variant", "type1")
        return tr.make_standard(
            variant,
            _parse_expr(p, "f", ["u"]),
            _parse_expr(p, "g", ["v"]),
            _rectangle(p, "domain", ((-1.0, 1.0), (-1.0, 1.0))),
        )
    if kind == "affine":
        return tr.make_affine(
            _matrix(p),
            _parse_expr(p, "f", ["u"]),
            _parse_expr(p, "g", ["v"]),
            _rectangle(p, "domain", ((-1.0, 1.0), (-1.0, 1.0))),
        )
    if kind == "constantK_type1":
        return tr.make_constant_K_type1(
            _number(p, "K0"), _number(p, "c"), _interval(p, "u_domain", (-1.0, 1.0))
        )
    if kind in ("cmc_cylinder_B_i", "cmc_cylinder_B_ii_1"):
        variant = kind.removeprefix("cmc_cylinder_")
        c1 = p.get("c1")
        return tr.make_cmc_cylinder(
            _number(p, "H0"),
            variant,
            f=_parse_expr(p, "f", ["u"], required=False),
            c1=float(c1) if c1 is not None else None,
            A=_matrix(p, required=False),
            x_domain=_interval(p, "x_domain", (-1.0, 1.0)),
        )
    if kind == "parabolic_ruled":
        return tr.make_parabolic_ruled(
            _matrix(p),
            _number(p, "c1"),
            _rectangle(p, "domain", ((-1.0, 1.0), (-1.0, 1.0))),
        )
    if kind == "type3":
        return tr.make_type3(
            _parse_expr(p, "f1", ["u"]),
            _parse_expr(p, "f2", ["u"]),
            _parse_expr(p, "g1", ["v"]),
            _parse_expr(p, "g2", ["v"]),
            _interval(p, "u_domain", (0.5, 2.0)),
            _interval(p, "v_domain", (-0.9, 0.9)),
        )
    if kind == "type3_circle":
        return tr.make_type3_circle(
            _number(p, "H0"),
            _parse_expr(p, "f1", ["u"]),
            _parse_expr(p, "f2", ["u"]),
            _interval(p, "u_domain", (0.5, 2.0)),
        )
    if kind == "type4":
        return tr.make_type4(
            _parse_expr(p, "f1", ["u"]),
            _parse_expr(p, "f2", ["u"]),
            _parse_expr(p, "g", ["v"]),
            _number(p, "a", 0.0),
            _interval(p, "u_domain", (0.5, 2.0)),
            _interval(p, "v_domain", (-1.0, 1.0)),
        )
    if kind == "type4_cmc_ode":
        return tr.make_type4_cmc_ode(
            _number(p, "H0"),
            _parse_expr(p, "f2", ["u"]),
            _number(p, "a", 0.0),
            _number(p, "c1", 0.0),
            _number(p, "u0"),
            _number(p, "u_end"),
            _number(p, "f1_0"),
            _number(p, "f1p_0"),
            steps=int(p.get("steps", 1000)),
            v_domain=_interval(p, "v_domain", (-1.0, 1.0)),
        )
    if kind == "ruled_type_C":
        return tr.make_ruled_type_C(
            _parse_expr(p, "x", ["u"]),
            _parse_expr(p, "y", ["u"]),
            _parse_expr(p, "z", ["u"]),
            _rectangle(p, "domain", ((-1.0, 1.0), (-1.0, 1.0))),
        )
    raise SceneError(f"unhandled scene kind {kind!r}")


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as err:
        raise _Unwritable(f"cannot write {path!r}: {err}") from None


class _Unwritable(Exception):
    pass


def _grid_arg(text: str) -> tuple[int, int]:
    try:
        nu, nv = text.lower().split("x")
        nu, nv = int(nu), int(nv)
    except ValueError:
        raise argparse.ArgumentTypeError("grid must look like 21x21") from None
    if nu < 2 or nv < 2:
        raise argparse.ArgumentTypeError("grid must be at least 2x2")
    return (nu, nv)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _cmd_eval(args) -> int:
    scene = scene_from_path(args.scene)
    family = build_family(scene)
    data = sf.fundamental(family.surface, args.u, args.v)
    xj, yj, zj = sf.coordinate_jets(family.surface, args.u, args.v)
    k = data.gaussian()
    h = data.mean()
    payload = {
        "u": args.u,
        "v": args.v,
        "point": [xj.c00, yj.c00, zj.c00],
        "normal": [data.normal.x, data.normal.y, data.normal.z],
        "W": data.w,
        "g": [data.g1, data.g2],
        "h": [[data.h11, data.h12], [data.h12, data.h22]],
        "L": [[data.l11, data.l12], [data.l12, data.l22]],
        "epsilon": data.epsilon,
        "K": k,
        "H_canonical": h.canonical,
        "H_paper": h.doubled,
    }
    sys.stdout.write(_dump_json(payload))
    return EXIT_OK


def _cmd_verify(args) -> int:
    scene = scene_from_path(args.scene)
    grid = args.grid or scene.grid or vf.DEFAULT_GRID
    out_path = args.out or scene.output.get("path")
    if args.theorem is not None and args.probe is not None:
        raise SceneError("--theorem and --probe are mutually exclusive")
    if args.theorem is not None:
        cert = vf.certify_theorem(args.theorem, scene.parameters, grid)
        _write_output(_dump_json(cert.to_dict()), out_path)
        if not args.quiet:
            print(
                f"certificate {cert.theorem}: {'PASS' if cert.passed else 'FAIL'}",
                file=sys.stderr,
            )
        return EXIT_OK if cert.passed else EXIT_FAILED_CHECK
    if args.probe is not None:
        rng = random.Random(args.seed) if args.seed is not None else None
        report = vf.probe_nonexistence(args.probe, grid, rng)
        _write_output(_dump_json(report.to_dict()), out_path)
        if not args.quiet:
            print(
                f"probe {report.probe}: {'PASS' if report.passed else 'FAIL'}",
                file=sys.stderr,
            )
        return EXIT_OK if report.passed else EXIT_FAILED_CHECK
    family = build_family(scene)
    report = vf.sample(family, grid, args.tol or scene.tol)
    _write_output(_dump_json(report.to_dict()), out_path)
    if report.unusable:
        if not args.quiet:
            print("report unusable: too many degenerate nodes", file=sys.stderr)
        return EXIT_DEGENERATE
    # the constancy verdict passes when either curvature channel is constant
    constant = (
        report.k.verdict == vf.CONSTANT or report.h_doubled.verdict == vf.CONSTANT
    )
    if not args.quiet:
        print(
            f"K: {report.k.verdict} (spread {report.k.spread:.3g}); "
            f"H_paper: {report.h_doubled.verdict} (spread {report.h_doubled.spread:.3g})",
            file=sys.stderr,
        )
    return EXIT_OK if constant else EXIT_FAILED_CHECK


def _surface_points(family, grid):
    us, vs = family.surface.grid(*grid)
    rows = []
    for u in us:
        for v in vs:
            xj, yj, zj = sf.coordinate_jets(family.surface, u, v)
            rows.append((u, v, xj.c00, yj.c00, zj.c00))
    return rows


def _cmd_mesh(args) -> int:
    scene = scene_from_path(args.scene)
    family = build_family(scene)
    grid = args.grid or scene.grid or vf.DEFAULT_GRID
    nu, nv = grid
    rows = _surface_points(family, grid)
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for (_, _, x, y, z) in rows]
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = (i + 1) * nv + j + 1
            lines.append(f"f {a} {b} {b + 1} {a + 1}")
    _write_output("\n".join(lines) + "\n", args.out)
    if not args.quiet:
        print(
            f"wrote {args.out}: {nu * nv} vertices, {(nu - 1) * (nv - 1)} faces",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_heatmap(args) -> int:
    scene = scene_from_path(args.scene)
    family = build_family(scene)
    grid = args.grid or scene.grid or vf.DEFAULT_GRID
    lines = ["u,v,x,y,z,K,H_canonical,H_paper"]
    us, vs = family.surface.grid(*grid)
    for u in us:
        for v in vs:
            xj, yj, zj = sf.coordinate_jets(family.surface, u, v)
            k, h = sf.curvatures(family.surface, u, v)
            lines.append(
                ",".join(
                    _fmt(t)
                    for t in (u, v, xj.c00, yj.c00, zj.c00, k, h.canonical, h.doubled)
                )
            )
    _write_output("\n".join(lines) + "\n", args.out)
    if not args.quiet:
        print(f"wrote {args.out}: {len(lines) - 1} rows", file=sys.stderr)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galileo",
        description="Curvature toolkit for translation surfaces in Galilean 3-space",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="fundamental data and curvatures at a point")
    p_eval.add_argument("scene")
    p_eval.add_argument("u", type=float)
    p_eval.add_argument("v", type=float)
    p_eval.set_defaults(fn=_cmd_eval)

    p_verify = sub.add_parser("verify", help="constancy report, certificate or probe")
    p_verify.add_argument("scene")
    p_verify.add_argument("--grid", type=_grid_arg, default=None)
    p_verify.add_argument("--tol", type=float, default=None)
    p_verify.add_argument("--theorem", choices=vf.THEOREM_IDS, default=None)
    p_verify.add_argument("--probe", choices=vf.PROBE_IDS, default=None)
    p_verify.add_argument("--seed", type=int, default=None, help="jitter probe sampling")
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(fn=_cmd_verify)

    p_mesh = sub.add_parser("mesh", help="export the surface as an OBJ quad mesh")
    p_mesh.add_argument("scene")
    p_mesh.add_argument("--grid", type=_grid_arg, default=None)
    p_mesh.add_argument("--out", required=True)
    p_mesh.set_defaults(fn=_cmd_mesh)

    p_heat = sub.add_parser("heatmap", help="export a per-node curvature CSV")
    p_heat.add_argument("scene")
    p_heat.add_argument("--grid", type=_grid_arg, default=None)
    p_heat.add_argument("--out", required=True)
    p_heat.set_defaults(fn=_cmd_heatmap)

    for p in (p_eval, p_verify, p_mesh, p_heat):
        p.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (SceneError, ExprError, ValidationError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_SCENE
    except (ExprEvalError, DegenerateSurfaceError, InadmissibleError) as err:
        print(f"evaluation error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except GeometryError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except _Unwritable as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_UNWRITABLE


if __name__ == "__main__":
    sys.exit(main())
