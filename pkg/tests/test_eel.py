import math

import pytest

from discrete_el.complex import SurfaceComplex, annulus, disk_grid, parallel_paths, path_graph, random_disk, triangle
from discrete_el.eel import (
    brute_force_eel,
    edge_area,
    edge_extremal_length,
    edge_family_length,
    edge_path,
    edge_path_length,
    is_edge_path,
    verify_theorem4,
)
from discrete_el.elsolver import scaled
from discrete_el.families import Connecting, boundary_family
from discrete_el.refinement import SCHEMES


def ladder(m, n):
    """``m`` disjoint paths of ``n`` edges and the family joining their ends."""
    c = parallel_paths(m, n + 1)
    k = n + 1
    return c, Connecting(range(0, m * k, k), range(n, m * k, k))


def test_edge_path_helpers():
    assert edge_path((0, 1, 1, 2)) == ((0, 1), (1, 2))
    assert edge_path((3,)) == ()
    c = triangle()
    assert is_edge_path(c, ((0, 1), (1, 2)))
    assert not is_edge_path(c, ())
    assert edge_path_length({(0, 1): 2.0, (1, 2): 0.5}, ((0, 1), (1, 2), (0, 1))) == 4.5
    assert edge_area({(0, 1): 3.0, (1, 2): 4.0}) == 25.0


def test_edge_family_length():
    c = path_graph(5)
    L, p = edge_family_length(c, {e: 1.0 for e in c.edges}, Connecting([0], [4]))
    assert L == 4 and p == ((0, 1), (1, 2), (2, 3), (3, 4))


@pytest.mark.parametrize("m,n", [(1, 3), (2, 2), (3, 2), (2, 5)])
def test_ladder(m, n):
    c, fam = ladder(m, n)
    r = edge_extremal_length(c, fam)
    assert r.value == pytest.approx(n / m, abs=1e-8)
    if c.n_vertices <= 12:
        assert brute_force_eel(c, fam).value == pytest.approx(n / m, abs=1e-6)


def test_single_edge():
    c = path_graph(2)
    assert edge_extremal_length(c, Connecting([0], [1])).value == pytest.approx(1.0, abs=1e-12)


def test_disconnected():
    c = SurfaceComplex.graph(range(4), [(0, 1), (2, 3)])
    assert math.isinf(edge_extremal_length(c, Connecting([0], [3])).value)
    assert math.isinf(brute_force_eel(c, Connecting([0], [3])).value)


def test_oracle_small_disks():
    for seed in range(6):
        c = random_disk(8, seed)
        for s, t in ((0, 7), (1, 5), (2, 6)):
            fam = Connecting([s], [t])
            assert abs(edge_extremal_length(c, fam).value - brute_force_eel(c, fam).value) <= 1e-6


def test_scale_invariance_of_returned_metric():
    c = annulus(3, 6)
    fam = boundary_family(c)
    r = edge_extremal_length(c, fam)
    for s in (0.01, 3.0, 250.0):
        w = scaled(r.metric, s)
        L, _ = edge_family_length(c, w, fam)
        assert L * L / edge_area(w) == pytest.approx(r.value, rel=1e-10, abs=1e-10)


def test_monotonicity_growing_source():
    c = disk_grid(3)
    prev = math.inf
    for k in range(1, 5):
        v = edge_extremal_length(c, Connecting(range(k), [15])).value
        assert v <= prev + 1e-9
        prev = v


def test_eel_identity_ratio_one():
    c = annulus(2, 6)
    rep = verify_theorem4(c, boundary_family(c), "identity")
    assert (rep.b, rep.c) == (0, 0)
    assert rep.passed and rep.ratio == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("c", [annulus(2, 6), disk_grid(3)], ids=["annulus", "grid"])
def test_eel_refinement_finiteness(c, scheme):
    fam = boundary_family(c) if len(c.boundary_cycles) == 2 else Connecting(range(0, 16, 4), range(3, 16, 4))
    rep = verify_theorem4(c, fam, scheme)
    assert rep.passed and rep.converged
    assert math.isfinite(rep.ratio) and rep.ratio > 0


def test_eel_refinement_deterministic():
    c = annulus(2, 6)
    a = verify_theorem4(c, boundary_family(c), "barycentric6")
    b = verify_theorem4(c, boundary_family(c), "barycentric6")
    assert abs(a.ratio - b.ratio) <= 1e-8
