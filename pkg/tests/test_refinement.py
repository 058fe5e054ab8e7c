import pytest
from hypothesis import given, settings, strategies as st

from discrete_el.complex import annulus, disk_grid, pants, random_disk, torus, triangle, validate
from discrete_el.refinement import (
    SCHEMES,
    RefinementError,
    compose,
    identity_map,
    refine,
    refine_custom,
    refine_levels,
    strong_c,
)
from discrete_el import io

MID4_TRIANGLE = [(0, 3, 4), (1, 3, 5), (2, 4, 5), (3, 4, 5)]


def _counts(m):
    return len(m.refined.vertices), len(m.refined.faces), m.b


def test_identity_triangle():
    m = refine(triangle(), "identity")
    assert m.refined == triangle()
    assert (m.b, m.c) == (0, 0)


def test_face_center_triangle():
    m = refine(triangle(), "face_center")
    assert _counts(m) == (4, 3, 0)
    assert m.c == 1


def test_midpoint4_triangle():
    m = refine(triangle(), "midpoint4")
    assert _counts(m) == (6, 4, 1)
    assert sorted(m.refined.faces) == sorted(tuple(sorted(f)) for f in MID4_TRIANGLE)
    # no vertex lies strictly inside a face
    assert m.c == 0


def test_barycentric6_triangle():
    m = refine(triangle(), "barycentric6")
    assert _counts(m) == (7, 6, 1)
    assert m.c == 1


def test_closed_face_reading_disagrees_with_identity_c0():
    # counting neighbours in the closed face gives c=2 already for the identity
    m = identity_map(triangle())
    assert strong_c(m) == 0
    assert strong_c(m, closed=True) == 2


def test_compose_examples():
    t = triangle()
    ii = compose(identity_map(t), identity_map(t))
    assert ii.b == 0 and ii.refined == t
    m1 = refine(t, "midpoint4")
    mm = compose(m1, refine(m1.refined, "midpoint4"))
    assert mm.b == 3
    assert all(len(p) == 5 for p in mm.edge_paths.values())
    fc = refine(t, "face_center")
    fi = compose(fc, identity_map(fc.refined))
    assert fi.b == 0 and fi.refined == fc.refined


def test_compose_bound_and_mismatch():
    c = disk_grid(2)
    m1, m2 = refine(c, "barycentric6"), None
    m2 = refine(m1.refined, "midpoint4")
    m = compose(m1, m2)
    assert m.b <= (m1.b + 2) * (m2.b + 2) - 2
    with pytest.raises(ValueError, match="m2.source"):
        compose(m1, refine(c, "midpoint4"))


def test_refine_levels():
    m = refine_levels(triangle(), "midpoint4", 2)
    assert m.b == 3
    assert len(refine_levels(torus(4, 4), "midpoint4", 2).refined.vertices) == 256
    assert refine_levels(triangle(), "midpoint4", 0).refined == triangle()
    with pytest.raises(ValueError):
        refine_levels(triangle(), "midpoint4", -1)


def test_unknown_scheme():
    with pytest.raises(ValueError, match="unknown scheme"):
        refine(triangle(), "hexagonal")


def _bookkeeping(m):
    src = m.source
    n_att = sum(len(r) for r in m.attached.values())
    assert sum(len(ws) for ws in m.eps.values()) == 2 * n_att
    n_int = sum(len(ws) for ws in m.face_interior.values())
    assert len(m.refined.vertices) == len(src.vertices) + n_att + n_int
    roles = [m.role(w) for w in m.refined.vertices]
    assert roles.count("vertex") == len(src.vertices)
    assert roles.count("attached") == n_att
    assert max(len(p) for p in m.edge_paths.values()) - 2 == m.b
    assert validate(m.refined).ok
    for e, p in m.edge_paths.items():
        assert p[0] == m.iota[e[0]] and p[-1] == m.iota[e[1]]


DECLARED_B = {"identity": 0, "face_center": 0, "midpoint4": 1, "barycentric6": 1}
DECLARED_C = {"identity": 0, "face_center": 1, "midpoint4": 0, "barycentric6": 1}


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize(
    "c", [triangle(), disk_grid(3), annulus(3, 6), torus(3, 4), pants()], ids=["tri", "grid", "ann", "torus", "pants"]
)
def test_schemes_on_builders(scheme, c):
    m = refine(c, scheme)
    _bookkeeping(m)
    assert m.b == DECLARED_B[scheme]
    assert m.c == DECLARED_C[scheme]
    assert m.refined.kind == c.kind
    assert validate(m.refined).euler == validate(c).euler


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 60), st.integers(0, 10**6), st.sampled_from(SCHEMES), st.integers(1, 2))
def test_bookkeeping_random(n, seed, scheme, levels):
    _bookkeeping(refine_levels(random_disk(n, seed), scheme, levels))


def test_custom_shared_attached_vertex_rejected():
    with pytest.raises(RefinementError, match=r"vertex 3 lies on paths of \(0, 1\) and \(0, 2\)"):
        refine_custom(
            triangle(), MID4_TRIANGLE, {0: 0, 1: 1, 2: 2}, {(0, 1): (0, 3, 1), (0, 2): (0, 3, 4, 2), (1, 2): (1, 5, 2)}
        )


def test_custom_path_through_image_rejected():
    with pytest.raises(RefinementError, match="passes through iota-image 2"):
        refine_custom(
            triangle(), MID4_TRIANGLE, {0: 0, 1: 1, 2: 2}, {(0, 1): (0, 4, 2, 5, 1), (0, 2): (0, 4, 2), (1, 2): (1, 5, 2)}
        )


def test_custom_matches_builtin():
    m = refine_custom(
        triangle(), MID4_TRIANGLE, {0: 0, 1: 1, 2: 2}, {(0, 1): (0, 3, 1), (2, 0): (2, 4, 0), (1, 2): (1, 5, 2)}
    )
    ref = refine(triangle(), "midpoint4")
    assert (m.b, m.c) == (ref.b, ref.c)
    assert m.refined == ref.refined


@pytest.mark.parametrize("scheme", ["midpoint4", "barycentric6"])
def test_refinement_file_round_trip(scheme):
    m = refine(annulus(2, 5), scheme)
    text = io.write_refinement(m)
    back = io.read_refinement(text, m.source)
    assert back.refined == m.refined
    assert dict(back.edge_paths) == dict(m.edge_paths)
    assert (back.b, back.c) == (m.b, m.c)
    assert io.write_refinement(back) == text
