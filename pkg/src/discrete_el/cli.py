"""Command line front end.

Exit status: 0 success, 1 validation or input failure, 2 a distortion
bound was violated, 3 a solver did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .complex import SurfaceComplex, build, random_disk, validate
from .eel import edge_extremal_length, verify_theorem4
from .elsolver import extremal_length
from .families import Connecting, Explicit, boundary_family, refine_family
from .orientation import orient_surface, outdegree_profile
from .refinement import SCHEMES, RefinementMap, compose, refine, refine_levels
from .transfer import check_bounds

EXIT_OK, EXIT_INVALID, EXIT_BOUND, EXIT_NONCONVERGED = 0, 1, 2, 3

SHAPE_PARAMS = {
    "triangle": (),
    "triangle_center": (),
    "disk_grid": ("n",),
    "annulus": ("rings", "circ"),
    "cylinder": ("rings", "circ"),
    "torus": ("rows", "cols"),
    "sphere_minus_disks": ("disks",),
    "pants": (),
    "path": ("n",),
    "parallel": ("m", "n"),
    "random_disk": ("n", "seed"),
}


@dataclass
class ExperimentConfig:
    shape: str | None
    params: dict = field(default_factory=dict)
    schemes: tuple[str, ...] = ("midpoint4",)
    levels: tuple[int, ...] = (1,)
    complex_path: str | None = None
    family_path: str | None = None
    tol: float = 1e-10
    output: str | None = None
    edge: bool = False
    seed: int = 0
    vertex_cap: int = 200_000

    def check(self) -> None:
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if any(lv < 0 for lv in self.levels):
            raise ValueError("levels must be >= 0")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ValueError(f"unknown scheme {s!r}")
        for p in (self.complex_path, self.family_path):
            if p is not None and not Path(p).exists():
                raise ValueError(f"file not found: {p}")
        if self.shape is None and self.complex_path is None:
            raise ValueError("give --shape or --complex")


def build_shape(shape: str, params: dict) -> SurfaceComplex:
    if shape not in SHAPE_PARAMS:
        raise ValueError(f"unknown shape {shape!r}; choose from {sorted(SHAPE_PARAMS)}")
    names = SHAPE_PARAMS[shape]
    missing = [k for k in names if params.get(k) is None and k != "seed"]
    if missing:
        raise ValueError(f"shape {shape} needs --{' --'.join(missing)}")
    if shape == "random_disk":
        return random_disk(params["n"], random.Random(params.get("seed") or 0))
    args = [params[k] for k in names]
    return build(shape, *args)


def shape_family(shape: str, c: SurfaceComplex, params: dict) -> Connecting:
    """Default connecting family for each builder shape."""
    if shape == "disk_grid":
        w = params["n"] + 1
        return Connecting([i * w for i in range(w)], [i * w + w - 1 for i in range(w)])
    if shape in ("annulus", "cylinder", "sphere_minus_disks", "pants"):
        return boundary_family(c)
    if shape == "torus":
        rows, cols = params["rows"], params["cols"]
        return Connecting([i * cols for i in range(rows)], [i * cols + cols // 2 for i in range(rows)])
    if shape == "path":
        return Connecting([0], [params["n"] - 1])
    if shape == "parallel":
        m, n = params["m"], params["n"]
        return Connecting([i * n for i in range(m)], [i * n + n - 1 for i in range(m)])
    vs = c.vertices
    return Connecting([vs[0]], [vs[1]])


def _fmt(x: float) -> str:
    return repr(float(x)) if math.isfinite(x) else str(x)


def _params_str(params: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(params.items()) if v is not None)


def run_verify(cfg: ExperimentConfig, out) -> int:
    cfg.check()
    if cfg.complex_path:
        c = io.load(cfg.complex_path, io.read_complex)
        shape = Path(cfg.complex_path).name
    else:
        c = build_shape(cfg.shape, cfg.params)
        shape = cfg.shape
    rep = validate(c)
    if not rep:
        print("invalid complex: " + "; ".join(rep.messages()[:5]), file=sys.stderr)
        return EXIT_INVALID
    if cfg.family_path:
        fam = io.load(cfg.family_path, io.read_family)
    elif cfg.shape:
        fam = shape_family(cfg.shape, c, cfg.params)
    else:
        raise ValueError("--family is required with --complex")
    if not isinstance(fam, Connecting):
        raise ValueError("verify needs a connecting family")
    header = ["shape", "params", "scheme", "levels", "b"]
    if cfg.edge:
        header += ["c", "el_coarse", "el_fine", "ratio", "finite_equivalent", "pass"]
    else:
        header += ["el_coarse", "el_fine", "ratio", "k_forward", "k_backward", "pass"]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    bound_failed = stalled = False
    coarse_cache = None
    for scheme in cfg.schemes:
        for lv in cfg.levels:
            m = _guarded_refine(c, scheme, lv, cfg.vertex_cap)
            if cfg.edge:
                r = verify_theorem4(c, fam, scheme, tol=cfg.tol, refinement=m)
                row = [shape, _params_str(cfg.params), scheme, lv, r.b, r.c, _fmt(r.eel_coarse.value),
                       _fmt(r.eel_fine.value), _fmt(r.ratio), str(r.finite_equivalent).lower(),
                       str(r.passed).lower()]
            else:
                if coarse_cache is None:
                    coarse_cache = extremal_length(c, fam, cfg.tol)
                fine = extremal_length(m.refined, refine_family(fam, m), cfg.tol)
                r = check_bounds(m.b, coarse_cache, fine)
                row = [shape, _params_str(cfg.params), scheme, lv, r.b, _fmt(r.el_coarse.value),
                       _fmt(r.el_fine.value), _fmt(r.ratio), _fmt(r.k_forward), _fmt(r.k_backward),
                       str(r.passed).lower()]
            w.writerow(row)
            if not r.passed:
                bound_failed = True
            if not r.converged:
                stalled = True
    if bound_failed:
        return EXIT_BOUND
    return EXIT_NONCONVERGED if stalled else EXIT_OK


def _guarded_refine(c: SurfaceComplex, scheme: str, levels: int, cap: int) -> RefinementMap:
    m = refine_levels(c, scheme, 0)
    for _ in range(levels):
        # every supported scheme at most quadruples the vertex count
        if 4 * m.refined.n_vertices > cap:
            raise ValueError(f"refinement would exceed the vertex cap {cap}")
        m = compose(m, refine(m.refined, scheme))
    return m


def _family_from_args(args) -> Connecting | Explicit:
    if args.family:
        return io.load(args.family, io.read_family)
    if args.source and args.target:
        return Connecting(_idlist(args.source), _idlist(args.target))
    raise ValueError("give --family FILE or both --source and --target")


def _idlist(s: str) -> list[int]:
    return [int(x) for x in s.replace(",", " ").split()]


def _add_shape_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shape", choices=sorted(SHAPE_PARAMS))
    for name in ("n", "rings", "circ", "rows", "cols", "disks", "m"):
        p.add_argument(f"--{name}", type=int)


def _shape_params(args) -> dict:
    names = SHAPE_PARAMS.get(args.shape, ())
    params = {k: getattr(args, k, None) for k in names if k != "seed"}
    if "seed" in names:
        params["seed"] = args.seed
    return params


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="discrete-el", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="write a test complex")
    _add_shape_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")

    p = sub.add_parser("orient", help="bounded-outdegree orientation of a complex file")
    p.add_argument("complex")
    p.add_argument("-o", "--output")

    p = sub.add_parser("refine", help="refine a complex file")
    p.add_argument("complex")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("-o", "--output")

    for name, helptext in (("el", "vertex extremal length"), ("eel", "edge extremal length")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("complex")
        p.add_argument("--family")
        p.add_argument("--source", help="comma separated vertex ids")
        p.add_argument("--target", help="comma separated vertex ids")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--metric-out")

    p = sub.add_parser("verify", help="check the refinement distortion bounds, CSV output")
    _add_shape_args(p)
    p.add_argument("--complex")
    p.add_argument("--family")
    p.add_argument("--scheme", default="midpoint4", help="comma separated list")
    p.add_argument("--levels", default="1", help="comma separated list")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--edge", action="store_true", help="edge extremal length instead of vertex")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertex-cap", type=int, default=200_000)
    p.add_argument("-o", "--output")
    return ap


def _emit(text: str, path: str | None, out) -> None:
    if path:
        Path(path).write_text(text)
    else:
        out.write(text)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        return _dispatch(args, out)
    except (ValueError, io.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def _dispatch(args, out) -> int:
    if args.cmd == "build":
        if not args.shape:
            raise ValueError("--shape is required")
        c = build_shape(args.shape, _shape_params(args))
        _emit(io.write_complex(c), args.output, out)
        return EXIT_OK

    if args.cmd == "orient":
        c = io.load(args.complex, io.read_complex)
        rep = validate(c)
        if not rep:
            print("invalid complex: " + "; ".join(rep.messages()[:5]), file=sys.stderr)
            return EXIT_INVALID
        o, cut = orient_surface(c)
        _, mx = outdegree_profile(c, o)
        _emit(io.write_orientation(o), args.output, out)
        print(f"max_outdegree={mx} cuts={len(cut.cycles)}", file=out if args.output else sys.stderr)
        return EXIT_OK

    if args.cmd == "refine":
        c = io.load(args.complex, io.read_complex)
        m = refine_levels(c, args.scheme, args.levels)
        _emit(io.write_refinement(m), args.output, out)
        print(f"b={m.b} c={m.c} vertices={m.refined.n_vertices}", file=out if args.output else sys.stderr)
        return EXIT_OK

    if args.cmd in ("el", "eel"):
        c = io.load(args.complex, io.read_complex)
        fam = _family_from_args(args)
        if args.cmd == "el":
            r = extremal_length(c, fam, args.tol)
        else:
            if not isinstance(fam, Connecting):
                raise ValueError("eel needs a connecting family")
            r = edge_extremal_length(c, fam, args.tol)
        print(f"EL={_fmt(r.value)} lower={_fmt(r.lower)} upper={_fmt(r.upper)} iters={r.iterations}", file=out)
        if args.metric_out and r.finite:
            Path(args.metric_out).write_text(io.write_metric(r.metric))
        return EXIT_OK if r.converged else EXIT_NONCONVERGED

    if args.cmd == "verify":
        cfg = ExperimentConfig(
            shape=args.shape,
            params=_shape_params(args) if args.shape else {},
            schemes=tuple(s.strip() for s in args.scheme.split(",") if s.strip()),
            levels=tuple(int(x) for x in args.levels.split(",") if x.strip()),
            complex_path=args.complex,
            family_path=args.family,
            tol=args.tol,
            output=args.output,
            edge=args.edge,
            seed=args.seed,
            vertex_cap=args.vertex_cap,
        )
        buf = _io.StringIO()
        status = run_verify(cfg, buf)
        _emit(buf.getvalue(), cfg.output, out)
        return status
    raise AssertionError(args.cmd)


if __name__ == "__main__":
    sys.exit(main())
