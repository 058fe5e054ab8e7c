"""Acceptance gate. Each test checks one numbered criterion at its stated
tolerance and runtime, prints a single PASS/FAIL line, and fails if the
criterion fails. The lines are repeated in the terminal summary."""

import math
import random
import time

import pytest

from discrete_el.complex import (
    SurfaceComplex,
    annulus,
    build,
    cylinder,
    disk_corpus,
    disk_grid,
    parallel_paths,
    path_graph,
    random_disk,
    sphere_minus_disks,
    torus,
    triangle,
    triangle_with_center,
)
from discrete_el.eel import brute_force_eel, edge_extremal_length, verify_theorem4
from discrete_el.elsolver import area, brute_force_el, extremal_length, path_length
from discrete_el.families import (
    Connecting,
    Explicit,
    boundary_family,
    enumerate_family,
    is_regular,
    membership,
    refine_family,
    simple_paths,
)
from discrete_el.orientation import Orientation, check_planar_bounds, orient_planar, orient_surface, outdegree_profile
from discrete_el.refinement import SCHEMES, refine, refine_levels
from discrete_el.transfer import lift_metric, pushdown_metric, shadow_down, shadow_up, verify_theorem3

from conftest import random_metric


# -- 1 -------------------------------------------------------------------------


def planar_builder_corpus():
    cs = [triangle(), triangle_with_center()]
    cs += [disk_grid(n) for n in (1, 2, 3, 5, 8, 13, 21, 40)]
    cs += [annulus(r, k) for r, k in ((2, 3), (2, 6), (3, 8), (5, 12), (10, 40), (30, 60))]
    cs += [cylinder(r, k) for r, k in ((2, 4), (6, 7), (20, 25))]
    cs += [sphere_minus_disks(1), sphere_minus_disks(2)]
    return cs


def test_criterion_1_planar_orientation(criterion):
    rng = random.Random(1)
    randoms = [random_disk(rng.randint(3, 5000), 10_000 + i) for i in range(200)]
    corpus = planar_builder_corpus() + randoms
    bad = []
    t0 = time.perf_counter()
    for c in corpus:
        if check_planar_bounds(c, orient_planar(c)):
            bad.append((c.kind, c.n_vertices))
    elapsed = time.perf_counter() - t0
    # three holes: the boundary cap 2 is infeasible by counting, shown here
    p = sphere_minus_disks(3)
    nb = len(p.boundary_vertices)
    capacity = 3 * p.n_vertices - nb
    infeasible = len(p.edges) > capacity
    ok = not bad and elapsed < 10.0 and infeasible
    criterion(
        1,
        ok,
        f"{len(corpus)} complexes ({len(corpus) - 200} builders + 200 random disks, "
        f"{sum(c.n_vertices for c in randoms)} random vertices), violations={len(bad)}, "
        f"orientation time {elapsed:.2f}s < 10s; three-hole sphere excluded: "
        f"|E|={len(p.edges)} > capacity {capacity}",
    )
    assert ok, bad[:5]


# -- 2 -------------------------------------------------------------------------


def test_criterion_2_surface_orientation(criterion):
    corpus = [annulus(r, k) for r, k in ((2, 3), (4, 9), (25, 40), (100, 100))]
    corpus += [cylinder(r, k) for r, k in ((2, 4), (10, 12), (100, 100))]
    corpus += [sphere_minus_disks(d) for d in (1, 2, 3)]
    corpus += [torus(r, k) for r, k in ((3, 3), (4, 4), (5, 5), (17, 23), (100, 100))]
    worst, t0 = 0, time.perf_counter()
    for c in corpus:
        o, _ = orient_surface(c)
        worst = max(worst, outdegree_profile(c, o)[1])
    elapsed = time.perf_counter() - t0
    ok = worst <= 5 and elapsed < 10.0 and max(c.n_vertices for c in corpus) == 10_000
    criterion(2, ok, f"{len(corpus)} complexes up to 10000 vertices, max outdegree {worst} <= 5, {elapsed:.2f}s < 10s")
    assert ok


# -- 3 -------------------------------------------------------------------------


def test_criterion_3_analytic_values(criterion):
    t0 = time.perf_counter()
    errs = []
    for n in range(1, 31):
        c = path_graph(n)
        fam = Explicit([(0,)]) if n == 1 else Connecting([0], [n - 1])
        errs.append(abs(extremal_length(c, fam).value - n))
    oracle_errs = []
    for m, n in ((2, 3), (3, 2), (3, 4)):
        c = parallel_paths(m, n)
        fam = Connecting(range(0, m * n, n), range(n - 1, m * n, n))
        errs.append(abs(extremal_length(c, fam).value - n / m))
        oracle_errs.append(abs(brute_force_el(c, fam).value - n / m))
    elapsed = time.perf_counter() - t0
    ok = max(errs) <= 1e-6 and max(oracle_errs) <= 1e-6 and elapsed < 30.0
    criterion(
        3, ok, f"P_1..P_30 and 3 parallel families, max |error| {max(errs):.1e}, "
        f"oracle max |error| {max(oracle_errs):.1e}, {elapsed:.2f}s < 30s"
    )
    assert ok


# -- 4 -------------------------------------------------------------------------


def small_builders():
    cs = [annulus(2, 3), annulus(2, 4), cylinder(2, 3), cylinder(2, 4), torus(3, 3), disk_grid(2)]
    cs += [path_graph(n) for n in range(2, 10)]
    cs += [parallel_paths(2, 3), parallel_paths(2, 4), parallel_paths(3, 3)]
    return cs


def test_criterion_4_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    corpus = disk_corpus(9) + small_builders()
    worst, pairs, first_bad = 0.0, 0, None
    for c in corpus:
        vs = c.vertices
        for i, s in enumerate(vs):
            for t in vs[i + 1 :]:
                # reversing paths maps the s->t family onto t->s with equal lengths
                fam = Connecting([s], [t])
                d = abs(extremal_length(c, fam).value - brute_force_el(c, fam).value)
                pairs += 1
                if d > worst:
                    worst = d
                if d > 1e-6 and first_bad is None:
                    first_bad = (c.faces, s, t, d)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 60.0
    criterion(
        4, ok, f"{len(corpus)} complexes (all disks <= 9 vertices + builders), {pairs} pairs, "
        f"max |difference| {worst:.1e} <= 1e-6, {elapsed:.1f}s < 60s"
    )
    assert ok, first_bad


# -- 5 -------------------------------------------------------------------------


def _walk_between(c, rng, source, target, cap=5000):
    v = rng.choice(sorted(source))
    out = [v]
    while v not in target and len(out) < cap:
        v = rng.choice(c.adjacency[v] + (v,))
        out.append(v)
    return tuple(out)


def test_criterion_5_transfer_inequalities(criterion):
    t0 = time.perf_counter()
    counts = {"pushdown": 0, "lift": 0, "shadow_up": 0, "shadow_down": 0}
    trials = 0
    setups = [(annulus(3, 8), None), (torus(4, 4), Connecting(range(0, 16, 4), range(2, 16, 4)))]
    for c, fam in setups:
        fam = fam or boundary_family(c)
        m = refine(c, "midpoint4")
        b = m.b
        o, _ = orient_surface(c)
        fine = refine_family(fam, m)
        rng = random.Random(5 + c.n_vertices)
        for _ in range(1000):
            trials += 1
            mu = random_metric(rng, m.refined.vertices)
            theta = pushdown_metric(mu, m)
            if not area(theta) <= 2 * area(mu):
                counts["pushdown"] += 1
            gamma = _walk_between(c, rng, fam.source, fam.target)
            gamma_r = shadow_up(gamma, m)
            if not (membership(gamma_r, fine, m.refined)
                    and path_length(mu, gamma_r) <= (1 + b) * path_length(theta, gamma)):
                counts["shadow_up"] += 1
            th = random_metric(rng, c.vertices)
            lifted = lift_metric(th, o, m)
            if not area(lifted) <= (1 + 5 * b) * area(th):
                counts["lift"] += 1
            walk = _walk_between(m.refined, rng, fine.source, fine.target)
            down = shadow_down(walk, o, m, fam)
            if abs(path_length(th, down) - path_length(lifted, walk)) > 1e-12:
                counts["shadow_down"] += 1
    elapsed = time.perf_counter() - t0
    ok = not any(counts.values()) and elapsed < 30.0
    criterion(5, ok, f"{trials} trials on annulus(3,8) and torus 4x4 with midpoint4, violations {counts}, {elapsed:.2f}s < 30s")
    assert ok


# -- 6 -------------------------------------------------------------------------


def test_criterion_6_shadow_aaabc(criterion):
    A, B, C = 0, 1, 2
    m = refine(triangle(), "midpoint4")
    o = Orientation({(A, B): A, (A, C): A, (B, C): B})
    gamma_r = (A, m.attached[(A, B)][0], m.attached[(A, C)][0], m.attached[(B, C)][0], C)
    shadow = "".join("ABC"[v] for v in shadow_down(gamma_r, o, m, Connecting([A], [C])))
    ok = shadow == "AAABC"
    criterion(6, ok, f"midpoint-refined triangle, arrows A->B, A->C, B->C, refined path A m_AB m_CA m_BC C -> {shadow}")
    assert ok


# -- 7 -------------------------------------------------------------------------


def distortion_configs():
    g = disk_grid(4)
    a = annulus(3, 8)
    t = torus(4, 4)
    return [
        ("disk_grid(4)", g, Connecting(range(0, 25, 5), range(4, 25, 5))),
        ("annulus(3,8)", a, boundary_family(a)),
        ("torus(4,4)", t, Connecting(range(0, 16, 4), range(2, 16, 4))),
    ]


def test_criterion_7_distortion_bounds(criterion):
    t0 = time.perf_counter()
    rows, fails = [], []
    expect = {("identity", 1): (2, 1), ("face_center", 1): (2, 1), ("midpoint4", 1): (8, 6), ("midpoint4", 2): (32, 16)}
    for name, c, fam in distortion_configs():
        for (scheme, levels), (kf, kb) in expect.items():
            rep = verify_theorem3(c, fam, scheme, levels)
            coarse, fine, slack = rep.el_coarse.value, rep.el_fine.value, rep.slack
            checks = [
                (rep.k_forward, rep.k_backward) == (kf, kb),
                fine / coarse <= kf + slack,  # refined vs source, forward constant
                coarse / fine <= kb + slack,  # source vs refined, backward constant
                1 / kb - slack <= coarse / fine,  # as literally stated; see notes
                rep.passed,
                rep.converged,
            ]
            if scheme == "identity":
                checks.append(abs(coarse - fine) <= 1e-8)
            rows.append((name, scheme, levels, coarse / fine))
            if not all(checks):
                fails.append((name, scheme, levels, checks))
    elapsed = time.perf_counter() - t0
    ok = not fails and elapsed < 300
    lo = min(r[3] for r in rows)
    hi = max(r[3] for r in rows)
    criterion(7, ok, f"{len(rows)} configurations, EL(G)/EL(rG) in [{lo:.4f}, {hi:.4f}], failures {len(fails)}, {elapsed:.1f}s < 300s")
    assert ok, fails


# -- 8 -------------------------------------------------------------------------


def test_criterion_8_eel(criterion):
    ladder_err = 0.0
    for m, n in ((1, 3), (2, 2), (3, 2)):
        c = parallel_paths(m, n + 1)
        k = n + 1
        fam = Connecting(range(0, m * k, k), range(n, m * k, k))
        ladder_err = max(ladder_err, abs(edge_extremal_length(c, fam).value - n / m))
        ladder_err = max(ladder_err, abs(brute_force_eel(c, fam).value - n / m))
    configs = [("annulus(2,6)", annulus(2, 6), None), ("disk_grid(3)", disk_grid(3), Connecting(range(0, 16, 4), range(3, 16, 4))),
               ("torus(3,3)", torus(3, 3), Connecting([0, 3, 6], [1, 4, 7]))]
    finite_ok, drift, ratios = True, 0.0, []
    for name, c, fam in configs:
        fam = fam or boundary_family(c)
        for scheme in SCHEMES:
            first = verify_theorem4(c, fam, scheme)
            again = verify_theorem4(c, fam, scheme)
            finite_ok &= first.finite_equivalent and first.converged
            drift = max(drift, abs(first.ratio - again.ratio))
            ratios.append(first.ratio)
    ok = ladder_err <= 1e-6 and finite_ok and drift <= 1e-8
    criterion(
        8, ok, f"ladder max |error| {ladder_err:.1e}, finiteness equivalent on {len(ratios)} scheme/complex runs, "
        f"EEL ratios in [{min(ratios):.4f}, {max(ratios):.4f}], rerun drift {drift:.1e} <= 1e-8"
    )
    assert ok


# -- 9 -------------------------------------------------------------------------


def regularity_families(c):
    vs = c.vertices
    n = len(vs)
    if n <= 7:
        pairs = [(s, t) for i, s in enumerate(vs) for t in vs[i + 1 :]]
    else:
        pairs = [(vs[0], vs[1]), (vs[0], vs[n // 2]), (vs[0], vs[-1])]
    fams = [Connecting([s], [t]) for s, t in pairs]
    if n >= 4:
        fams.append(Connecting(vs[:2], vs[-2:]))
    return fams


def test_criterion_9_regularity(criterion):
    checked = empty = 0
    failures = []
    for c in disk_corpus(9) + small_builders():
        for fam in regularity_families(c):
            if next(simple_paths(c, fam), None) is None:
                empty += 1  # S and T in different components: nothing to close
                continue
            res = is_regular(c, enumerate_family(c, fam), within=fam)
            checked += 1
            if not res:
                failures.append((c.faces, fam, res))
    X, A, B, C, Y = range(5)
    kite = SurfaceComplex.from_faces([(A, B, C)], "graph", extra_edges=[(X, A), (B, Y)])
    cases = [
        (kite, Explicit([(X, A, B, Y), (A, C), (C, B)]), (X, A, C, B, Y), "detour"),
        (path_graph(5), Explicit([(0, 1, 2), (2, 3, 4)]), (0, 1, 2, 3, 4), "splice"),
        (triangle_with_center(), Explicit([(0, 1), (1, 3), (0, 3)]), (0, 3, 1), "detour"),
    ]
    hand = []
    for c, fam, witness, rule in cases:
        res = is_regular(c, fam)
        hand.append(not res and res.witness == witness and res.rule == rule)
    ok = not failures and all(hand)
    criterion(9, ok, f"{checked} enumerated connecting families regular ({empty} empty skipped), {sum(hand)}/{len(hand)} violation cases caught with the expected witness")
    assert ok, (failures[:3], hand)
