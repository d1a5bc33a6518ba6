"""Command-line entry point: validate, eval, sample, check and demo."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .basis import KINDS, ProcedureConfig
from .demo import FIELDS, demo_data, make_mesh
from .errors import (DegenerateTriangle, MeshIndexError, MissingData, OutsideDomain,
                     ParseError, ShapeConfigError, TrisplineError)
from .geometry import Point
from .mesh import MeshFile, VertexGradientData, load_mesh, serialize_mesh, validate_mesh
from .spline import SplineField, format_float, sample_grid, write_csv
from .verify import (DEFAULT_SEED, AffineMap, Report, check_c1, check_degree,
                     check_edge_shape, check_invariance, check_vertex_conditions,
                     random_homothety, random_isometry)

__all__ = ["main", "build_parser", "SUITES", "SHEAR"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("c1", "vertex", "shape", "invariance", "degree")
SHEAR = ((1.0, 0.0), (1.0, 1.0))
SEED_ENV = "TRISPLINE_SEED"


class _UsageError(Exception):
    pass


def _floats(n: int):
    def parse(text: str) -> tuple[float, ...]:
        try:
            vals = tuple(float(v) for v in text.split(","))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers") from exc
        if len(vals) != n or not all(math.isfinite(v) for v in vals):
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated finite numbers")
        return vals
    return parse


def _grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected NX,NY") from exc
    if nx < 2 or ny < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per axis")
    return nx, ny


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}") from exc


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad count {text!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError("count must be positive")
    return n


def _diag(msg: str) -> None:
    print(f"trispline: {msg}", file=sys.stderr)


def _load(path: str) -> MeshFile:
    try:
        return load_mesh(path)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _config(mf: MeshFile, path: str | None) -> ProcedureConfig:
    block = mf.config
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise _UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise _UsageError("config file must hold a JSON object")
        block = doc.get("config", doc)
    if block is not None and not isinstance(block, dict):
        raise _UsageError("config block must be an object")
    return ProcedureConfig.from_json(block)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit(text: str, path: str | None) -> None:
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _merge(name: str, reports: list[Report]) -> Report:
    return Report(name, max(r.max_jump for r in reports),
                  [e for r in reports for e in r.per_edge],
                  all(r.passed for r in reports), max(r.tolerance for r in reports))


def cmd_validate(args) -> int:
    mf = _load(args.path)
    report = validate_mesh(mf.mesh, seed=args.seed)
    print(json.dumps(report.to_dict(), indent=2))
    for name in report.failed():
        _diag(f"check failed: {name}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_eval(args) -> int:
    mf = _load(args.path)
    fld = SplineField(mf.mesh, mf.data, _config(mf, args.config))
    x, y = args.at
    val, grad, tri = fld.evaluate(Point(x, y))
    print(f"f={format_float(val)} fx={format_float(grad.dx)} fy={format_float(grad.dy)} tri={tri}")
    return EXIT_OK


def cmd_sample(args) -> int:
    mf = _load(args.path)
    fld = SplineField(mf.mesh, mf.data, _config(mf, args.config))
    bbox = args.bbox if args.bbox is not None else mf.mesh.bbox()
    if not (bbox[2] > bbox[0] and bbox[3] > bbox[1]):
        raise _UsageError(f"empty bounding box {bbox}")
    rows = sample_grid(fld, bbox, *args.grid)
    _emit(write_csv(rows), args.out)
    outside = sum(r.tri < 0 for r in rows)
    if outside:
        _diag(f"{outside} of {len(rows)} samples lie outside the mesh")
    return EXIT_OK


def _random_data(n: int, seed: int) -> VertexGradientData:
    return VertexGradientData(np.random.default_rng(seed).uniform(-1.0, 1.0, (n, 3)))


def run_suite(suite: str, mf: MeshFile, cfg: ProcedureConfig, seed: int,
              samples: int | None, shear: bool = False) -> Report:
    """One verification suite over the mesh of ``mf``.

    Suites that need gradient data fall back to seeded random data when the
    file carries none.
    """
    mesh = mf.mesh
    data = mf.data if mf.data is not None else _random_data(mesh.n_vertices, seed)
    fld = SplineField(mesh, data, cfg)
    if suite == "c1":
        return check_c1(fld, samples_per_edge=samples or 50)
    if suite == "vertex":
        return check_vertex_conditions(fld)
    if suite == "shape":
        return _merge("shape", [check_edge_shape(cfg, mesh.triangle(k), samples=samples or 20)
                                for k in range(mesh.n_triangles)])
    if suite == "invariance":
        n_points = samples or 200
        if shear:
            return check_invariance(fld, AffineMap.from_matrix(SHEAR), n_points, seed,
                                    expect_invariant=False)
        rng = np.random.default_rng(seed)
        maps = [random_isometry(rng) for _ in range(10)] + [random_homothety(rng) for _ in range(10)]
        return _merge("invariance", [check_invariance(fld, m, n_points, seed) for m in maps])
    if suite == "degree":
        order = cfg.degree()
        return _merge("degree", [check_degree(cfg, mesh.triangle(k), kind, order,
                                              n_chords=samples or 20, seed=seed)
                                 for k in range(mesh.n_triangles) for kind in KINDS])
    raise _UsageError(f"unknown suite {suite!r}")


def cmd_check(args) -> int:
    mf = _load(args.path)
    cfg = _config(mf, args.config)
    if args.shear and args.suite != "invariance":
        raise _UsageError("--shear applies to the invariance suite only")
    if args.suite in ("invariance", "degree") and not (cfg.k.is_zero and cfg.r.is_zero):
        _diag("non-zero k or R providers are not invariant")
    report = run_suite(args.suite, mf, cfg, args.seed, args.samples, args.shear)
    print(report.to_json(indent=2))
    if not report.passed:
        _diag(f"suite {args.suite} failed: {report.max_jump:.3e} vs tolerance {report.tolerance:.3e}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_demo(args) -> int:
    if args.field not in FIELDS:
        raise _UsageError(f"unknown field {args.field!r}; choose from {', '.join(FIELDS)}")
    kind, *rest = args.mesh
    if len(rest) > 1:
        raise _UsageError("--mesh takes a name and at most one size")
    try:
        n = int(rest[0]) if rest else None
        mesh = make_mesh(kind, n)
    except (KeyError, ValueError) as exc:
        raise _UsageError(f"bad mesh {' '.join(args.mesh)!r}: {exc}") from exc
    _emit(serialize_mesh(mesh, demo_data(mesh, args.field), indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trispline", description="C1 spline interpolation on triangular meshes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a mesh file is a conforming triangulation")
    p.add_argument("path")
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="value and gradient of the spline at one point")
    p.add_argument("path")
    p.add_argument("--at", type=_floats(2), required=True, metavar="X,Y")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", help="sample the spline on a regular grid into CSV")
    p.add_argument("path")
    p.add_argument("--bbox", type=_floats(4), default=None, metavar="X0,Y0,X1,Y1")
    p.add_argument("--grid", type=_grid, required=True, metavar="NX,NY")
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("path")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.add_argument("--samples", type=_positive, default=None)
    p.add_argument("--shear", action="store_true", help="confirm non-invariance under a shear")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("demo", help="write a mesh file with data from an analytic field")
    p.add_argument("--field", required=True)
    p.add_argument("--mesh", nargs="+", default=["square"], metavar="NAME [N]")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None and hasattr(args, "seed"):
        try:
            args.seed = int(env_seed, 0)
        except ValueError:
            _diag(f"bad {SEED_ENV} value {env_seed!r}")
            return EXIT_USAGE
    try:
        return args.func(args)
    except OutsideDomain as exc:
        _diag(str(exc))
        return EXIT_FAIL
    except (_UsageError, ParseError, MissingData, MeshIndexError, DegenerateTriangle,
            ShapeConfigError) as exc:
        _diag(str(exc))
        return EXIT_USAGE
    except TrisplineError as exc:
        _diag(f"{type(exc).__name__}: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
