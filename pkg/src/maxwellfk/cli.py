"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (including a
failed ``verify`` check).
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import closed_form as cf
from . import cuboid_search as cs
from .fem2d import ConvergenceError, DofBudgetExceeded, mesh_dumbbell, write_vtk
from .geometry import (
    CuboidDims,
    DumbbellParams,
    GeometryError,
    ScheduleParams,
    build_dumbbell,
    polygon_to_json,
)
from .kernels import BACKEND
from .maxwell_product import dumbbell_evaluate, schedule

SCHEMA = 1
SWEEP_HEADER = ("l1", "l2", "l3", "k", "lambda1")
DUMBBELL_HEADER = ("h", "delta", "eta", "L", "mu1N_bound", "mu1N_scaled", "lambda1_upper", "method")


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise ValidationError(message)


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in output")
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k), indent)}: {dumps(v, indent, _level + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _check_writable(path: str | None) -> None:
    if path is None or path == "-":
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise ValidationError(f"cannot write to {path}")


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _positive(name: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"--{name} must be positive, got {value!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="maxwellfk", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cuboid", parents=[common], help="first eigenvalue of a box")
    p.add_argument("--l", nargs=3, type=float, required=True, metavar=("L1", "L2", "L3"))

    p = sub.add_parser("ball", parents=[common], help="ball versus cube and the cuboid infimum")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--radius", type=float)
    g.add_argument("--surface", type=float, help="surface area k")
    g.add_argument("--volume", type=float, help="volume k")

    p = sub.add_parser("sweep", parents=[common], help="grid search over perimeter-constrained cuboids")
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--csv", dest="csv_path", default=None, help="write every grid point here")

    p = sub.add_parser("dumbbell", parents=[common], help="perimeter-normalized dumbbell product domains")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--p", type=float, default=None, help="delta = h^-p (default 2/beta + 1)")
    p.add_argument("--h-grid", nargs="+", type=float, default=[10.0, 1e2, 1e3, 1e4])
    p.add_argument("--fem", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--delta", type=float, default=None, help="override the schedule (requires --eta)")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--fem-target-h", type=float, default=1.0 / 32.0)
    p.add_argument("--fem-layers", type=int, default=4)
    p.add_argument("--csv", dest="csv_path", default=None, help="write the CSV summary here")
    p.add_argument("--dump-mesh", default=None, help="legacy VTK file of the FEM mesh (first h)")
    p.add_argument("--dump-geometry", default=None, help="JSON polygon of the base (first h)")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return parser


def _cmd_cuboid(args) -> tuple[dict, str | None]:
    try:
        c = CuboidDims(*args.l)
    except GeometryError as exc:
        raise ValidationError(str(exc)) from None
    lam = cf.cuboid_lambda1(c)
    rec = {"l1": c.l1, "l2": c.l2, "l3": c.l3, "volume": c.volume, "surface_area": c.surface_area, "lambda1": lam}
    return rec, _csv(("l1", "l2", "l3", "lambda1"), [(c.l1, c.l2, c.l3, lam)])


def _cmd_ball(args) -> tuple[dict, str | None]:
    a = cf.a11_prime()
    rec: dict[str, Any] = {"a11_prime": a, "pi": math.pi}
    if args.radius is not None:
        r = _positive("radius", args.radius)
        rec.update(radius=r, lambda1=cf.ball_lambda1_radius(r))
    elif args.surface is not None:
        k = _positive("surface", args.surface)
        rec.update(
            surface_area=k,
            radius=math.sqrt(k / (4 * math.pi)),
            lambda1=cf.ball_lambda1_surface(k),
            cube_lambda1=cf.cube_lambda1_surface(k),
            cuboid_infimum=4 * cf.PI2 / k,
        )
    else:
        k = _positive("volume", args.volume)
        rec.update(
            volume=k,
            radius=(3 * k / (4 * math.pi)) ** (1 / 3),
            lambda1=cf.ball_lambda1_volume(k),
            cube_lambda1=cf.cube_lambda1_volume(k),
        )
    keys = sorted(k for k, v in rec.items() if isinstance(v, float))
    return rec, _csv(keys, [[rec[k] for k in keys]])


def _cmd_sweep(args) -> tuple[dict, str | None]:
    k = _positive("k", args.k)
    if args.resolution < 10:
        raise ValidationError(f"--resolution must be >= 10, got {args.resolution}")
    _check_writable(args.csv_path)
    res, l3, l1, lam = cs.grid_search(k, args.resolution)
    l2 = (0.5 * k - l3 * l1) / (l3 + l1)
    rows = [
        (float(a), float(b), float(c), k, float(d))
        for a, b, c, d in zip(l1.ravel(), l2.ravel(), l3.ravel(), lam.ravel())
    ]
    table = _csv(SWEEP_HEADER, rows)
    if args.csv_path:
        _emit(table, args.csv_path)
    summary = {
        "k": k,
        "resolution": res.resolution,
        "n_points": res.n_points,
        "grid_min": res.lambda1,
        "argmin": {"l1": res.l1, "l2": res.l2, "l3": res.l3},
        "l3_floor": res.l3_floor,
        "infimum": res.infimum,
        "gap": res.gap,
        "relative_gap": res.gap / res.infimum,
        "all_above_infimum": res.min_margin > 0,
    }
    return summary, table


def _cmd_dumbbell(args) -> tuple[dict, str | None]:
    beta = _positive("beta", args.beta)
    p_exp = args.p if args.p is not None else 2.0 / beta + 1.0
    if args.fem_layers < 2:
        raise ValidationError("--fem-layers must be >= 2")
    _positive("fem-target-h", args.fem_target_h)
    for path in (args.csv_path, args.dump_mesh, args.dump_geometry):
        _check_writable(path)
    if (args.delta is None) != (args.eta is None):
        raise ValidationError("--delta and --eta must be given together")
    # validate every h before any meshing
    plans = []
    try:
        for h in args.h_grid:
            _positive("h-grid", h)
            if args.delta is not None:
                plans.append((DumbbellParams(args.delta, args.eta), h))
            else:
                plans.append((schedule(ScheduleParams(beta, h, p_exp)), h))
    except GeometryError as exc:
        raise ValidationError(str(exc)) from None

    runs = [
        dumbbell_evaluate(
            params, h, beta, p_exp, args.fem, fem_target_h=args.fem_target_h, fem_layers=args.fem_layers
        )
        for params, h in plans
    ]
    first = plans[0][0]
    if args.dump_geometry:
        _emit(polygon_to_json(build_dumbbell(first)), args.dump_geometry)
    if args.dump_mesh:
        write_vtk(mesh_dumbbell(first, args.fem_target_h, args.fem_layers), args.dump_mesh)
    table = _csv(DUMBBELL_HEADER, [tuple(getattr(r, f) for f in DUMBBELL_HEADER) for r in runs])
    if args.csv_path:
        _emit(table, args.csv_path)
    return {"beta": beta, "p": p_exp, "runs": [r.to_dict() for r in runs]}, table


def _cmd_verify(args) -> tuple[dict, str | None]:
    from .verify import run_checks

    rows = run_checks(args.seed)
    width = max(len(r["name"]) for r in rows)
    for r in rows:
        status = "PASS" if r["passed"] else "FAIL"
        print(f"{status}  {r['module']:<16} {r['name']:<{width}}", file=sys.stderr)
    n_pass = sum(r["passed"] for r in rows)
    print(f"{n_pass}/{len(rows)} checks passed", file=sys.stderr)
    table = _csv(("module", "name", "passed"), [(r["module"], r["name"], r["passed"]) for r in rows])
    return {"seed": args.seed, "checks": rows, "passed": n_pass == len(rows)}, table


COMMANDS = {
    "cuboid": _cmd_cuboid,
    "ball": _cmd_ball,
    "sweep": _cmd_sweep,
    "dumbbell": _cmd_dumbbell,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _check_writable(args.output)
        record, table = COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GeometryError, cs.InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, ArithmeticError, DofBudgetExceeded) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.format == "csv":
        _emit(table or "", args.output)
    else:
        _emit(dumps({"schema": SCHEMA, "command": args.command, "backend": BACKEND, "result": record}), args.output)
    if args.command == "verify" and not record["passed"]:
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
