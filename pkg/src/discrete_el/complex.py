"""Finite simplicial complexes on surfaces and the standard test builders.

A :class:`SurfaceComplex` is stored as plain sorted tuples so that two
complexes built from the same faces compare equal and serialize to the same
bytes. Edges and boundary cycles are normally inferred from the faces; the
raw constructor is kept permissive so :func:`validate` can report defects
(duplicate edges, dangling faces, ...) instead of failing on construction.

Plain graphs without faces (path graphs, parallel paths) use
``kind="graph"``; only the graph-level invariants are checked for them.
"""

from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

Edge = tuple[int, int]
Face = tuple[int, int, int]

SURFACE_KINDS = ("disk", "annulus", "cylinder_truncated", "sphere_minus_disks", "torus")
KINDS = SURFACE_KINDS + ("graph",)


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def face_key(a: int, b: int, c: int) -> Face:
    return tuple(sorted((a, b, c)))  # type: ignore[return-value]


def face_edges(f: Sequence[int]) -> tuple[Edge, Edge, Edge]:
    a, b, c = f
    return edge_key(a, b), edge_key(b, c), edge_key(a, c)


@dataclass(frozen=True, eq=True)
class SurfaceComplex:
    """Vertices, undirected edges, triangular faces and boundary cycles.

    Use :meth:`from_faces` to build a well-formed complex; the plain
    constructor stores whatever it is given.
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]
    boundary_cycles: tuple[tuple[int, ...], ...]
    kind: str

    @classmethod
    def from_faces(
        cls,
        faces: Iterable[Sequence[int]],
        kind: str,
        extra_edges: Iterable[Sequence[int]] = (),
        extra_vertices: Iterable[int] = (),
    ) -> "SurfaceComplex":
        fs = sorted({face_key(*f) for f in faces})
        es = set()
        for f in fs:
            es.update(face_edges(f))
        for u, v in extra_edges:
            es.add(edge_key(u, v))
        vs = set(extra_vertices)
        for e in es:
            vs.update(e)
        for f in fs:
            vs.update(f)
        edges = tuple(sorted(es))
        return cls(
            vertices=tuple(sorted(vs)),
            edges=edges,
            faces=tuple(fs),
            boundary_cycles=_extract_boundary_cycles(edges, fs),
            kind=kind,
        )

    @classmethod
    def graph(cls, vertices: Iterable[int], edges: Iterable[Sequence[int]]) -> "SurfaceComplex":
        return cls.from_faces((), "graph", extra_edges=edges, extra_vertices=vertices)

    @cached_property
    def adjacency(self) -> Mapping[int, tuple[int, ...]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    @cached_property
    def edge_faces(self) -> Mapping[Edge, tuple[Face, ...]]:
        out: dict[Edge, list[Face]] = defaultdict(list)
        for f in self.faces:
            for e in face_edges(f):
                out[e].append(f)
        return {e: tuple(fs) for e, fs in out.items()}

    @cached_property
    def vertex_faces(self) -> Mapping[int, tuple[Face, ...]]:
        out: dict[int, list[Face]] = defaultdict(list)
        for f in self.faces:
            for v in f:
                out[v].append(f)
        return {v: tuple(out.get(v, ())) for v in self.vertices}

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(v for cyc in self.boundary_cycles for v in cyc)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def faces_at(self, v: int) -> tuple[Face, ...]:
        return self.vertex_faces[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_set

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(set(self.edges)) + len(set(self.faces))

    def is_path(self, path: Sequence[int]) -> bool:
        """Nonempty over known vertices, with consecutive entries adjacent or equal."""
        if len(path) == 0:
            return False
        vs = self.adjacency
        if any(v not in vs for v in path):
            return False
        return all(a == b or self.has_edge(a, b) for a, b in zip(path, path[1:]))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)


def _extract_boundary_cycles(edges: Sequence[Edge], faces: Sequence[Face]) -> tuple[tuple[int, ...], ...]:
    if not faces:
        return ()
    count: dict[Edge, int] = defaultdict(int)
    for f in faces:
        for e in face_edges(f):
            count[e] += 1
    bedges = sorted(e for e, k in count.items() if k == 1)
    badj: dict[int, list[int]] = defaultdict(list)
    for u, v in bedges:
        badj[u].append(v)
        badj[v].append(u)
    for v in badj:
        badj[v].sort()
    used: set[Edge] = set()
    cycles = []
    for start in sorted(badj):
        while True:
            free = [w for w in badj[start] if edge_key(start, w) not in used]
            if not free:
                break
            cyc = [start]
            prev, cur = start, free[0]
            used.add(edge_key(prev, cur))
            while cur != start:
                cyc.append(cur)
                nxt = [w for w in badj[cur] if edge_key(cur, w) not in used]
                if not nxt:
                    break
                # prefer closing the cycle, then the smallest id
                w = start if start in nxt else nxt[0]
                used.add(edge_key(cur, w))
                prev, cur = cur, w
            cycles.append(tuple(cyc))
    return tuple(cycles)


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    euler: int
    failures: list[tuple[str, object]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def messages(self) -> list[str]:
        return [f"{name}: {witness}" for name, witness in self.failures]


def validate(c: SurfaceComplex) -> ValidationReport:
    """Check every structural invariant; each failure carries a witness."""
    fails: list[tuple[str, object]] = []
    vset = set(c.vertices)
    if c.kind not in KINDS:
        fails.append(("unknown kind", c.kind))

    seen: set[Edge] = set()
    for e in c.edges:
        u, v = e
        if u == v:
            fails.append(("self-loop", e))
            continue
        k = edge_key(u, v)
        if k in seen:
            fails.append(("parallel edge", k))
        seen.add(k)
        if u not in vset or v not in vset:
            fails.append(("edge with unknown vertex", e))

    fseen: set[Face] = set()
    for f in c.faces:
        if len(set(f)) != 3:
            fails.append(("degenerate face", f))
            continue
        k = face_key(*f)
        if k in fseen:
            fails.append(("duplicate face", k))
        fseen.add(k)
        for e in face_edges(f):
            if e not in seen:
                fails.append(("face edge missing", (f, e)))

    count: dict[Edge, int] = defaultdict(int)
    for f in fseen:
        for e in face_edges(f):
            count[e] += 1
    for e, k in sorted(count.items()):
        if k > 2:
            fails.append(("edge bounds more than two faces", e))

    on_cycle: set[Edge] = set()
    for cyc in c.boundary_cycles:
        n = len(cyc)
        if n < 3 or len(set(cyc)) != n:
            fails.append(("boundary cycle not simple", cyc))
        for i in range(n):
            on_cycle.add(edge_key(cyc[i], cyc[(i + 1) % n]))
    one_face = {e for e, k in count.items() if k == 1}
    for e in sorted(one_face - on_cycle):
        fails.append(("one-face edge off boundary", e))
    for e in sorted(on_cycle - one_face):
        fails.append(("boundary edge not bounding exactly one face", e))
    if c.faces:
        for e in sorted(seen):
            if count.get(e, 0) == 0:
                fails.append(("edge bounds no face", e))

    if vset and not _connected(c):
        fails.append(("disconnected", min(vset)))

    chi = len(vset) - len(seen) + len(fseen)
    nb = len(c.boundary_cycles)
    if c.kind == "disk" and (chi != 1 or nb != 1):
        fails.append(("euler/boundary mismatch for disk", (chi, nb)))
    elif c.kind in ("annulus", "cylinder_truncated") and (chi != 0 or nb != 2):
        fails.append((f"euler/boundary mismatch for {c.kind}", (chi, nb)))
    elif c.kind == "torus" and (chi != 0 or nb != 0):
        fails.append(("euler/boundary mismatch for torus", (chi, nb)))
    elif c.kind == "sphere_minus_disks" and (chi != 2 - nb or nb < 1):
        fails.append(("euler/boundary mismatch for sphere_minus_disks", (chi, nb)))
    if c.kind in SURFACE_KINDS and c.faces:
        for v in sorted(vset):
            if not _vertex_link_ok(c, v):
                fails.append(("vertex link not a disk or circle", v))
    return ValidationReport(ok=not fails, euler=chi, failures=fails)


def _connected(c: SurfaceComplex) -> bool:
    start = c.vertices[0]
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in c.adjacency[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(c.vertices)


def _vertex_link_ok(c: SurfaceComplex, v: int) -> bool:
    # the link of v is the graph on its neighbours formed by opposite edges
    link: dict[int, list[int]] = defaultdict(list)
    for f in c.vertex_faces.get(v, ()):
        a, b = (x for x in f if x != v)
        link[a].append(b)
        link[b].append(a)
    if not link:
        return False
    ends = [x for x, ns in link.items() if len(ns) == 1]
    if any(len(ns) > 2 for ns in link.values()) or len(ends) not in (0, 2):
        return False
    # connected link: a single arc or a single circle
    start = ends[0] if ends else next(iter(link))
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for y in link[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(link)


# -- builders -----------------------------------------------------------------


def triangle() -> SurfaceComplex:
    return SurfaceComplex.from_faces([(0, 1, 2)], "disk")


def triangle_with_center() -> SurfaceComplex:
    return SurfaceComplex.from_faces([(0, 1, 3), (1, 2, 3), (0, 2, 3)], "disk")


def disk_grid(n: int) -> SurfaceComplex:
    """(n+1) x (n+1) vertex grid, each square split along one diagonal."""
    if n < 1:
        raise ValueError("disk_grid needs n >= 1")
    w = n + 1
    faces = []
    for i in range(n):
        for j in range(n):
            a, b, c, d = i * w + j, i * w + j + 1, (i + 1) * w + j, (i + 1) * w + j + 1
            faces += [(a, b, c), (b, d, c)]
    return SurfaceComplex.from_faces(faces, "disk")


def _ring_faces(rings: int, circumference: int) -> list[Face]:
    faces = []
    for r in range(rings - 1):
        for j in range(circumference):
            j1 = (j + 1) % circumference
            a, b = r * circumference + j, r * circumference + j1
            c, d = (r + 1) * circumference + j, (r + 1) * circumference + j1
            faces += [(a, b, c), (b, d, c)]
    return faces


def annulus(rings: int, circumference: int) -> SurfaceComplex:
    """``rings`` concentric vertex cycles of ``circumference`` vertices each."""
    if rings < 2 or circumference < 3:
        raise ValueError("annulus needs rings >= 2 and circumference >= 3")
    return SurfaceComplex.from_faces(_ring_faces(rings, circumference), "annulus")


def cylinder(rings: int, circumference: int) -> SurfaceComplex:
    """Finite truncation of a half-infinite cylinder (same combinatorics as an annulus)."""
    if rings < 2 or circumference < 3:
        raise ValueError("cylinder needs rings >= 2 and circumference >= 3")
    return SurfaceComplex.from_faces(_ring_faces(rings, circumference), "cylinder_truncated")


def torus(rows: int, cols: int) -> SurfaceComplex:
    if rows < 3 or cols < 3:
        raise ValueError("torus grid needs at least 3 x 3 to avoid parallel edges")
    faces = []
    for i in range(rows):
        for j in range(cols):
            i1, j1 = (i + 1) % rows, (j + 1) % cols
            a, b, c, d = i * cols + j, i * cols + j1, i1 * cols + j, i1 * cols + j1
            faces += [(a, b, c), (b, d, c)]
    return SurfaceComplex.from_faces(faces, "torus")


def sphere_minus_disks(disks: int = 3) -> SurfaceComplex:
    """Grid with ``disks - 1`` square holes; its outer boundary is the last disk.

    ``disks=3`` is the pair of pants.
    """
    if disks < 1:
        raise ValueError("sphere_minus_disks needs at least one disk removed")
    cols = 3 if disks == 1 else 3 * disks - 2
    rows = 3
    holes = {(1, 3 * j + 1) for j in range(disks - 1)}
    w = cols + 1
    faces = []
    for i in range(rows):
        for j in range(cols):
            if (i, j) in holes:
                continue
            a, b, c, d = i * w + j, i * w + j + 1, (i + 1) * w + j, (i + 1) * w + j + 1
            faces += [(a, b, c), (b, d, c)]
    return SurfaceComplex.from_faces(faces, "sphere_minus_disks")


def pants() -> SurfaceComplex:
    return sphere_minus_disks(3)


def path_graph(n: int) -> SurfaceComplex:
    if n < 1:
        raise ValueError("path graph needs n >= 1")
    return SurfaceComplex.graph(range(n), [(i, i + 1) for i in range(n - 1)])


def parallel_paths(m: int, n: int) -> SurfaceComplex:
    """``m`` vertex-disjoint paths of ``n`` vertices; path ``i`` is ``i*n .. i*n+n-1``."""
    if m < 1 or n < 1:
        raise ValueError("parallel_paths needs m, n >= 1")
    edges = [(i * n + j, i * n + j + 1) for i in range(m) for j in range(n - 1)]
    return SurfaceComplex.graph(range(m * n), edges)


def random_disk(n: int, rng: random.Random | int | None = None, stack_prob: float = 0.4) -> SurfaceComplex:
    """Random triangulated disk on ``n`` vertices.

    Grows from a triangle by ears (new boundary vertex on a boundary edge),
    angle fills (closing two consecutive boundary edges) and stacking a new
    vertex inside a face. Stacking produces vertices of large degree.
    """
    if n < 3:
        raise ValueError("random_disk needs n >= 3")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    faces: list[Face] = [(0, 1, 2)]
    adj: dict[int, set[int]] = {0: {1, 2}, 1: {0, 2}, 2: {0, 1}}
    nxt = {0: 1, 1: 2, 2: 0}
    prv = {1: 0, 2: 1, 0: 2}
    bnd = [0, 1, 2]
    bpos = {0: 0, 1: 1, 2: 2}

    def bremove(v):
        i = bpos.pop(v)
        last = bnd.pop()
        if last != v:
            bnd[i] = last
            bpos[last] = i

    def badd(v):
        bpos[v] = len(bnd)
        bnd.append(v)

    k = 3
    while k < n:
        r = rng.random()
        if r < stack_prob:
            i = rng.randrange(len(faces))
            a, b, c = faces[i]
            faces[i] = (a, b, k)
            faces += [(b, c, k), (a, c, k)]
            adj[k] = {a, b, c}
            for x in (a, b, c):
                adj[x].add(k)
            k += 1
            continue
        v = bnd[rng.randrange(len(bnd))]
        u, w = prv[v], nxt[v]
        if r < stack_prob + 0.2 and len(bnd) > 3 and w not in adj[u]:
            faces.append((u, v, w))
            adj[u].add(w)
            adj[w].add(u)
            nxt[u], prv[w] = w, u
            del nxt[v], prv[v]
            bremove(v)
            continue
        faces.append((v, w, k))
        adj[k] = {v, w}
        adj[v].add(k)
        adj[w].add(k)
        nxt[v], prv[k], nxt[k], prv[w] = k, v, w, k
        badd(k)
        k += 1
    return SurfaceComplex.from_faces(faces, "disk")


BUILDERS = {
    "triangle": triangle,
    "triangle_center": triangle_with_center,
    "disk_grid": disk_grid,
    "annulus": annulus,
    "cylinder": cylinder,
    "torus": torus,
    "sphere_minus_disks": sphere_minus_disks,
    "pants": pants,
    "path": path_graph,
    "parallel": parallel_paths,
}


def build(shape: str, *args, **params) -> SurfaceComplex:
    """Build and validate a named test complex; raises ``ValueError`` if too small."""
    try:
        fn = BUILDERS[shape]
    except KeyError:
        raise ValueError(f"unknown shape {shape!r}; choose from {sorted(BUILDERS)}") from None
    c = fn(*args, **params)
    rep = validate(c)
    if not rep:
        raise ValueError(f"builder {shape} produced an invalid complex: {rep.messages()}")
    return c


def disk_corpus(max_vertices: int) -> list[SurfaceComplex]:
    """All triangulated disks with at most ``max_vertices`` vertices, up to isomorphism.

    Every triangulated disk is shellable, so each one is reached from a
    triangle by gluing a face along one boundary edge (new vertex) or along
    two consecutive boundary edges (closing an angle).
    """
    import networkx as nx

    def canon(c):
        # vertex-face incidence plus the edges; node type keeps faces apart from vertices
        g = nx.Graph()
        g.add_nodes_from(c.vertices, kind=0)
        g.add_edges_from(c.edges)
        for f in c.faces:
            g.add_node(("f",) + f, kind=1)
            for v in f:
                g.add_edge(("f",) + f, v)
        return g

    out: list[SurfaceComplex] = []
    buckets: dict[tuple, list] = defaultdict(list)
    frontier = [triangle()]

    def add(c):
        g = canon(c)
        bv = c.boundary_vertices
        key = tuple(
            sorted((v in bv, c.degree(v), tuple(sorted(c.degree(w) for w in c.adjacency[v]))) for v in c.vertices)
        )
        for h in buckets[key]:
            if nx.vf2pp_is_isomorphic(g, h, node_label="kind"):
                return False
        buckets[key].append(g)
        out.append(c)
        return True

    add(frontier[0])
    while frontier:
        new = []
        for c in frontier:
            (cyc,) = c.boundary_cycles
            n = len(cyc)
            for i in range(n):
                u, v, w = cyc[i - 1], cyc[i], cyc[(i + 1) % n]
                if c.n_vertices < max_vertices:
                    k = c.n_vertices
                    d = SurfaceComplex.from_faces(list(c.faces) + [(v, w, k)], "disk")
                    if add(d):
                        new.append(d)
                if n > 3 and not c.has_edge(u, w):
                    d = SurfaceComplex.from_faces(list(c.faces) + [(u, v, w)], "disk")
                    if add(d):
                        new.append(d)
        frontier = new
    return out
