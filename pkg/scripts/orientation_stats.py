"""Outdegree statistics of bounded orientations.

Orients random disks of growing size plus the builder surfaces and writes
the outdegree histogram and timing per complex as CSV.

    python3 scripts/orientation_stats.py --sizes 100,1000,10000 --trials 5
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from collections import Counter

from discrete_el.complex import annulus, cylinder, random_disk, sphere_minus_disks, torus
from discrete_el.orientation import orient_surface, outdegree_profile


def rows(sizes, trials, seed):
    rng = random.Random(seed)
    for n in sizes:
        for t in range(trials):
            yield f"random_disk(n={n},trial={t})", random_disk(n, random.Random(rng.getrandbits(32)))
    for k in (10, 30, 100):
        yield f"annulus({k},{k})", annulus(k, k)
        yield f"cylinder({k},{k})", cylinder(k, k)
        yield f"torus({k},{k})", torus(k, k)
    yield "sphere_minus_disks(2)", sphere_minus_disks(2)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,1000,5000")
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output")
    args = ap.parse_args(argv)

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.writer(out)
    w.writerow(["complex", "kind", "vertices", "edges", "max_out"] + [f"out_{d}" for d in range(6)] + ["seconds"])
    for name, c in rows([int(s) for s in args.sizes.split(",")], args.trials, args.seed):
        t0 = time.perf_counter()
        o, _ = orient_surface(c)
        dt = time.perf_counter() - t0
        prof, mx = outdegree_profile(c, o)
        hist = Counter(prof.values())
        w.writerow([name, c.kind, c.n_vertices, len(c.edges), mx] + [hist.get(d, 0) for d in range(6)] + [f"{dt:.3f}"])
        out.flush()
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
