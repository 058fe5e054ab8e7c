"""Refinements of triangulations and their bookkeeping.

A refinement keeps an injected copy of every source vertex and realizes
every source edge as a path in the refined complex; the interior vertices
of that path are *attached* to the edge. Everything else sits strictly
inside one source face. ``b`` (longest edge path minus its endpoints) and
``c`` (strong boundedness) are always computed from the data, never taken
from the scheme's name.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .complex import Edge, Face, SurfaceComplex, edge_key, face_edges, face_key, validate

SCHEMES = ("identity", "face_center", "midpoint4", "barycentric6")


@dataclass(frozen=True, eq=False)
class RefinementMap:
    source: SurfaceComplex
    refined: SurfaceComplex
    iota: Mapping[int, int]
    edge_paths: Mapping[Edge, tuple[int, ...]]  # oriented from iota(e[0]) to iota(e[1])
    attached: Mapping[Edge, tuple[int, ...]]
    face_interior: Mapping[Face, tuple[int, ...]]
    face_parent: Mapping[Face, Face]
    b: int
    c: int

    def path(self, u: int, v: int) -> tuple[int, ...]:
        """Refined path of source edge ``uv`` running from ``iota(u)`` to ``iota(v)``."""
        p = self.edge_paths[edge_key(u, v)]
        return p if u < v else p[::-1]

    @cached_property
    def attached_to(self) -> dict[int, Edge]:
        return {w: e for e, ws in self.attached.items() for w in ws}

    @cached_property
    def interior_to(self) -> dict[int, Face]:
        return {w: f for f, ws in self.face_interior.items() for w in ws}

    @cached_property
    def preimage(self) -> dict[int, int]:
        return {w: v for v, w in self.iota.items()}

    @cached_property
    def eps(self) -> dict[int, tuple[int, ...]]:
        """Refined vertices attached to some edge at ``v``, per source vertex."""
        out: dict[int, list[int]] = {v: [] for v in self.source.vertices}
        for e, ws in self.attached.items():
            for v in e:
                out[v].extend(ws)
        return {v: tuple(sorted(ws)) for v, ws in out.items()}

    def closure(self, f: Face) -> set[int]:
        """Refined vertices inside or attached to source face ``f`` (corners included)."""
        out = {self.iota[v] for v in f}
        for e in face_edges(f):
            out.update(self.attached[e])
        out.update(self.face_interior.get(f, ()))
        return out

    def role(self, w: int) -> str:
        if w in self.preimage:
            return "vertex"
        if w in self.attached_to:
            return "attached"
        return "interior"


class RefinementError(ValueError):
    pass


def make_map(
    source: SurfaceComplex,
    refined: SurfaceComplex,
    iota: Mapping[int, int],
    edge_paths: Mapping[Edge, Sequence[int]],
) -> RefinementMap:
    """Check the refinement conditions and derive attached sets, face interiors, b and c."""
    rep = validate(refined)
    if not rep:
        raise RefinementError(f"refined complex invalid: {rep.messages()[:3]}")
    rv = set(refined.vertices)
    if set(iota) != set(source.vertices):
        raise RefinementError("iota must be defined on every source vertex")
    images = list(iota.values())
    if len(set(images)) != len(images) or not set(images) <= rv:
        raise RefinementError("iota must be an injection into the refined vertices")
    image_set = set(images)
    paths: dict[Edge, tuple[int, ...]] = {}
    owner: dict[int, Edge] = {}
    for e in source.edges:
        if e not in edge_paths:
            raise RefinementError(f"missing edge path for {e}")
        p = tuple(edge_paths[e])
        a, b = e
        if len(p) < 2 or p[0] != iota[a] or p[-1] != iota[b]:
            raise RefinementError(f"edge path for {e} must run from iota({a}) to iota({b}): {p}")
        if not refined.is_path(p) or len(set(p)) != len(p):
            raise RefinementError(f"edge path for {e} is not a simple refined path: {p}")
        for w in p[1:-1]:
            if w in image_set:
                raise RefinementError(f"edge path {e} passes through iota-image {w}")
            if w in owner:
                raise RefinementError(f"vertex {w} lies on paths of {owner[w]} and {e}")
            owner[w] = e
        paths[e] = p
    attached = {e: p[1:-1] for e, p in paths.items()}
    path_edges = {edge_key(x, y) for p in paths.values() for x, y in zip(p, p[1:])}

    # source-face regions: refined faces connected across non-path edges
    anchor_corners: dict[int, set[int]] = {}
    pre = {w: v for v, w in iota.items()}
    for w, v in pre.items():
        anchor_corners[w] = {v}
    for w, e in owner.items():
        anchor_corners[w] = set(e)
    comp: dict[Face, int] = {}
    regions: list[list[Face]] = []
    for f in refined.faces:
        if f in comp:
            continue
        k = len(regions)
        comp[f] = k
        members, todo = [f], [f]
        while todo:
            g = todo.pop()
            for e in face_edges(g):
                if e in path_edges:
                    continue
                for h in refined.edge_faces[e]:
                    if h not in comp:
                        comp[h] = k
                        members.append(h)
                        todo.append(h)
        regions.append(members)
    face_parent: dict[Face, Face] = {}
    interior: dict[Face, set[int]] = defaultdict(set)
    claimed: dict[int, Face] = {}
    src_faces = set(source.faces)
    for members in regions:
        corners: set[int] = set()
        verts = {v for g in members for v in g}
        for v in verts:
            corners |= anchor_corners.get(v, set())
        parent = face_key(*corners) if len(corners) == 3 else None
        if parent not in src_faces:
            raise RefinementError(f"refined faces {members[:3]} do not fill a single source face")
        for g in members:
            face_parent[g] = parent
        for v in verts - set(anchor_corners):
            if v in claimed and claimed[v] != parent:
                raise RefinementError(f"vertex {v} lies inside two source faces")
            claimed[v] = parent
            interior[parent].add(v)
    parents = set(face_parent.values())
    if parents != src_faces:
        raise RefinementError(f"source faces without refined region: {sorted(src_faces - parents)[:3]}")
    if len(regions) != len(src_faces):
        raise RefinementError("a source face is split into disconnected refined regions")
    unclassified = rv - image_set - set(owner) - set(claimed)
    if unclassified:
        raise RefinementError(f"refined vertices not accounted for: {sorted(unclassified)[:5]}")
    b = max((len(p) - 2 for p in paths.values()), default=0)
    m = RefinementMap(
        source=source,
        refined=refined,
        iota=dict(iota),
        edge_paths=paths,
        attached=attached,
        face_interior={f: tuple(sorted(interior.get(f, ()))) for f in source.faces},
        face_parent=face_parent,
        b=b,
        c=0,
    )
    object.__setattr__(m, "c", strong_c(m))
    return m


def strong_c(m: RefinementMap, closed: bool = False) -> int:
    """Largest number of refined edges from an edge-related vertex into one face.

    For every edge ``e`` of a source face ``F`` and every vertex ``w`` that is
    an endpoint image of ``e`` or attached to it, count refined neighbours of
    ``w`` strictly inside ``F``. ``closed=True`` counts neighbours anywhere
    in the closed face instead.
    """
    best = 0
    adj = m.refined.adjacency
    for f in m.source.faces:
        inside = set(m.face_interior.get(f, ()))
        target = m.closure(f) if closed else inside
        for e in face_edges(f):
            for w in (m.iota[e[0]], m.iota[e[1]], *m.attached[e]):
                k = sum(1 for x in adj[w] if x in target and x != w)
                best = max(best, k)
    return best


def refine(c: SurfaceComplex, scheme: str) -> RefinementMap:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    iota = {v: v for v in c.vertices}
    nxt = max(c.vertices) + 1
    mid: dict[Edge, int] = {}
    center: dict[Face, int] = {}
    if scheme in ("midpoint4", "barycentric6"):
        for e in c.edges:
            mid[e] = nxt
            nxt += 1
    if scheme in ("face_center", "barycentric6"):
        for f in c.faces:
            center[f] = nxt
            nxt += 1
    faces: list[tuple[int, int, int]] = []
    for f in c.faces:
        a, b, d = f
        if scheme == "identity":
            faces.append(f)
        elif scheme == "face_center":
            z = center[f]
            faces += [(a, b, z), (b, d, z), (a, d, z)]
        elif scheme == "midpoint4":
            ab, bd, ad = mid[edge_key(a, b)], mid[edge_key(b, d)], mid[edge_key(a, d)]
            faces += [(a, ab, ad), (b, ab, bd), (d, bd, ad), (ab, bd, ad)]
        else:
            z = center[f]
            ab, bd, ad = mid[edge_key(a, b)], mid[edge_key(b, d)], mid[edge_key(a, d)]
            faces += [(a, ab, z), (ab, b, z), (b, bd, z), (bd, d, z), (d, ad, z), (ad, a, z)]
    if c.kind == "graph" and mid:
        raise ValueError("subdividing schemes need a complex with faces")
    # source edges survive unsubdivided unless a midpoint replaces them
    refined = SurfaceComplex.from_faces(
        faces, c.kind, extra_edges=() if mid else c.edges, extra_vertices=c.vertices
    )
    paths = {e: ((e[0], mid[e], e[1]) if e in mid else e) for e in c.edges}
    return make_map(c, refined, iota, paths)


def refine_custom(
    c: SurfaceComplex,
    refined_faces: Sequence[Sequence[int]],
    iota: Mapping[int, int],
    edge_paths: Mapping[Edge, Sequence[int]],
) -> RefinementMap:
    """User-supplied refinement; raises :class:`RefinementError` with a witness if invalid."""
    refined = SurfaceComplex.from_faces(refined_faces, c.kind)
    return make_map(c, refined, iota, {edge_key(*e): p if e[0] < e[1] else p[::-1] for e, p in edge_paths.items()})


def identity_map(c: SurfaceComplex) -> RefinementMap:
    return refine(c, "identity")


def compose(m1: RefinementMap, m2: RefinementMap) -> RefinementMap:
    """Refine by ``m1`` then ``m2``."""
    if m2.source != m1.refined:
        raise ValueError("compose needs m2.source == m1.refined")
    iota = {v: m2.iota[m1.iota[v]] for v in m1.source.vertices}
    paths = {}
    for e in m1.source.edges:
        p1 = m1.edge_paths[e]
        out = [m2.iota[p1[0]]]
        for x, y in zip(p1, p1[1:]):
            out.extend(m2.path(x, y)[1:])
        paths[e] = tuple(out)
    return make_map(m1.source, m2.refined, iota, paths)


def refine_levels(c: SurfaceComplex, scheme: str, levels: int) -> RefinementMap:
    """``levels``-fold iterate of a scheme; zero levels is the identity."""
    if levels < 0:
        raise ValueError("levels must be >= 0")
    m = identity_map(c)
    for _ in range(levels):
        m = compose(m, refine(m.refined, scheme))
    return m
