"""Measure how extremal length moves under refinement.

For each test surface and each (scheme, levels) pair, solve the vertex (or, with
--edge, the edge) extremal length before and after refining and write one
CSV row. Data only; no plots.

    python3 scripts/distortion_sweep.py -o results/distortion.csv
    python3 scripts/distortion_sweep.py --edge --levels 1
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from discrete_el.cli import build_shape, shape_family
from discrete_el.eel import verify_theorem4
from discrete_el.refinement import SCHEMES, refine_levels
from discrete_el.transfer import verify_theorem3

SURFACES = [
    ("disk_grid", {"n": 3}),
    ("disk_grid", {"n": 5}),
    ("annulus", {"rings": 2, "circ": 6}),
    ("annulus", {"rings": 3, "circ": 8}),
    ("cylinder", {"rings": 3, "circ": 8}),
    ("sphere_minus_disks", {"disks": 2}),
    ("torus", {"rows": 4, "cols": 4}),
]

FIELDS = ["shape", "params", "scheme", "levels", "n_coarse", "n_fine", "b", "c",
          "coarse", "fine", "ratio", "passed", "converged", "seconds"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--schemes", default=",".join(SCHEMES))
    ap.add_argument("--levels", default="1")
    ap.add_argument("--edge", action="store_true")
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--max-vertices", type=int, default=1000, help="skip refinements larger than this")
    ap.add_argument("-o", "--output")
    args = ap.parse_args(argv)

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(out, FIELDS)
    w.writeheader()
    for shape, params in SURFACES:
        c = build_shape(shape, params)
        fam = shape_family(shape, c, params)
        for scheme in args.schemes.split(","):
            for levels in map(int, args.levels.split(",")):
                m = refine_levels(c, scheme, levels)
                if m.refined.n_vertices > args.max_vertices:
                    continue
                t0 = time.perf_counter()
                if args.edge:
                    if m.c is None:
                        continue
                    rep = verify_theorem4(c, fam, scheme, tol=args.tol, refinement=m)
                    coarse, fine = rep.eel_coarse, rep.eel_fine
                else:
                    rep = verify_theorem3(c, fam, scheme, tol=args.tol, refinement=m)
                    coarse, fine = rep.el_coarse, rep.el_fine
                w.writerow({
                    "shape": shape,
                    "params": ";".join(f"{k}={v}" for k, v in params.items()),
                    "scheme": scheme,
                    "levels": levels,
                    "n_coarse": c.n_vertices,
                    "n_fine": m.refined.n_vertices,
                    "b": m.b,
                    "c": "" if m.c is None else m.c,
                    "coarse": f"{coarse.value:.10g}",
                    "fine": f"{fine.value:.10g}",
                    "ratio": f"{rep.ratio:.6f}",
                    "passed": rep.passed,
                    "converged": rep.converged,
                    "seconds": f"{time.perf_counter() - t0:.2f}",
                })
                out.flush()
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
