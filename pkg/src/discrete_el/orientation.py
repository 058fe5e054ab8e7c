"""Edge orientations with globally bounded outdegree.

``orient_planar`` gives interior vertices outdegree at most 3 and boundary
vertices at most 2. ``orient_surface`` handles the remaining surface kinds
by cutting along disjoint simple cycles into disks and annuli, orienting
each piece with the planar bound, turning every cut cycle into a directed
cycle and gluing back. A vertex on a cut cycle then collects at most two
non-cycle out-edges from each side plus its one cycle out-edge, so 5 in all.
"""

from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .complex import Edge, Face, SurfaceComplex, edge_key, face_edges, validate


@dataclass(frozen=True)
class Orientation:
    """``tail_of[e]`` is the tail endpoint of edge ``e``."""

    tail_of: Mapping[Edge, int]

    def head_of(self, e: Edge) -> int:
        t = self.tail_of[e]
        return e[1] if t == e[0] else e[0]

    def tail(self, u: int, v: int) -> int:
        return self.tail_of[edge_key(u, v)]

    def arcs(self) -> list[tuple[int, int]]:
        return [(self.tail_of[e], self.head_of(e)) for e in sorted(self.tail_of)]

    def outdegree(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for t in self.tail_of.values():
            out[t] += 1
        return dict(out)


@dataclass(frozen=True)
class CutSystem:
    """Cut cycles (in their chosen cyclic direction) and the resulting pieces.

    ``layering`` lists the face sets of the pieces, in original labels. For a
    layered disk or annulus these are the nested annuli, innermost first.
    """

    cycles: tuple[tuple[int, ...], ...] = ()
    layering: tuple[tuple[Face, ...], ...] = ()


def outdegree_profile(c: SurfaceComplex, o: Orientation) -> tuple[dict[int, int], int]:
    missing = [e for e in c.edges if e not in o.tail_of]
    if missing:
        raise ValueError(f"orientation is not total; e.g. edge {missing[0]} has no tail")
    prof = {v: 0 for v in c.vertices}
    for e in c.edges:
        prof[o.tail_of[e]] += 1
    return prof, max(prof.values(), default=0)


def check_planar_bounds(c: SurfaceComplex, o: Orientation, capped: Iterable[int] | None = None) -> list[int]:
    """Vertices violating interior <= 3 / boundary <= 2; empty when the bound holds."""
    capped = c.boundary_vertices if capped is None else set(capped)
    prof, _ = outdegree_profile(c, o)
    return [v for v in c.vertices if prof[v] > (2 if v in capped else 3)]


# -- bounded orientation core -------------------------------------------------


def bounded_orientation(
    vertices: Sequence[int], edges: Sequence[Edge], cap: Mapping[int, int]
) -> dict[Edge, int]:
    """Orientation with ``outdegree(v) <= cap[v]``, or ``ValueError`` if none exists.

    Peels vertices whose residual degree fits their cap (the peeled vertex
    becomes the tail of all its remaining edges). When peeling stalls the
    least-overfull vertex is peeled anyway and the excess is repaired by
    reversing directed paths to vertices with spare capacity. Path reversal
    fails only if some vertex set spans more edges than its total capacity,
    in which case no valid orientation exists.
    """
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    resid = {v: len(adj[v]) for v in vertices}
    removed: set[int] = set()
    ready = [v for v in vertices if resid[v] <= cap[v]]
    heapq.heapify(ready)
    # fallback queue keyed by overfullness; stale entries are skipped on pop
    over = [(resid[v] - cap[v], v) for v in vertices]
    heapq.heapify(over)
    tail: dict[Edge, int] = {}
    left = len(vertices)
    while left:
        v = None
        while ready:
            x = heapq.heappop(ready)
            if x not in removed:
                v = x
                break
        while v is None:
            k, x = heapq.heappop(over)
            if x not in removed and k == resid[x] - cap[x]:
                v = x
        removed.add(v)
        left -= 1
        for w in adj[v]:
            if w in removed:
                continue
            tail[edge_key(v, w)] = v
            resid[w] -= 1
            heapq.heappush(over, (resid[w] - cap[w], w))
            if resid[w] == cap[w]:
                heapq.heappush(ready, w)

    out: dict[int, set[int]] = {v: set() for v in vertices}
    for e, t in tail.items():
        out[t].add(e[1] if t == e[0] else e[0])
    for v in sorted(vertices):
        while len(out[v]) > cap[v]:
            path = _augmenting_path(v, out, cap)
            if path is None:
                raise ValueError(f"no orientation within the given caps exists (stuck at vertex {v})")
            for a, b in zip(path, path[1:]):
                out[a].discard(b)
                out[b].add(a)
                tail[edge_key(a, b)] = b
    return tail


def _augmenting_path(src: int, out: Mapping[int, set[int]], cap: Mapping[int, int]) -> list[int] | None:
    prev = {src: src}
    q = deque([src])
    while q:
        x = q.popleft()
        for y in sorted(out[x]):
            if y in prev:
                continue
            prev[y] = x
            if len(out[y]) < cap[y]:
                path = [y]
                while path[-1] != src:
                    path.append(prev[path[-1]])
                return path[::-1]
            q.append(y)
    return None


# -- planar case --------------------------------------------------------------


def is_planar_surface(c: SurfaceComplex) -> bool:
    """Genus-zero test: a connected surface with ``d`` boundary cycles has chi = 2 - d."""
    if c.kind == "graph":
        return False
    return c.euler_characteristic() == 2 - len(c.boundary_cycles) and len(c.boundary_cycles) >= 1


def planar_caps(c: SurfaceComplex) -> dict[int, int]:
    # With three or more holes the boundary-2 cap cannot hold on every hole
    # (edge count exceeds total capacity), so only the first cycle is outer.
    cycles = c.boundary_cycles if len(c.boundary_cycles) <= 2 else c.boundary_cycles[:1]
    capped = {v for cyc in cycles for v in cyc}
    return {v: 2 if v in capped else 3 for v in c.vertices}


def orient_planar(c: SurfaceComplex) -> Orientation:
    if not is_planar_surface(c):
        raise ValueError(f"orient_planar needs a genus-zero complex with boundary, got kind={c.kind}")
    cap = planar_caps(c)
    o = Orientation(bounded_orientation(c.vertices, c.edges, cap))
    prof, _ = outdegree_profile(c, o)
    bad = [v for v in c.vertices if prof[v] > cap[v]]
    assert not bad, f"planar outdegree bound violated at {bad[:5]}"
    return o


# -- cutting ------------------------------------------------------------------


def coherent_faces(c: SurfaceComplex) -> dict[Face, tuple[int, int, int]]:
    """Cyclic vertex order per face so that shared edges are traversed oppositely."""
    order: dict[Face, tuple[int, int, int]] = {}
    for root in c.faces:
        if root in order:
            continue
        order[root] = root
        q = deque([root])
        while q:
            f = q.popleft()
            a, b, cc = order[f]
            for x, y in ((a, b), (b, cc), (cc, a)):
                for g in c.edge_faces[edge_key(x, y)]:
                    if g == f:
                        continue
                    z = next(t for t in g if t != x and t != y)
                    want = (y, x, z)
                    if g in order:
                        if not _same_rotation(order[g], want):
                            raise ValueError("complex is not orientable")
                    else:
                        order[g] = want
                        q.append(g)
    return order


def _same_rotation(p, q) -> bool:
    return q in (p, (p[1], p[2], p[0]), (p[2], p[0], p[1]))


def _check_cycle(c: SurfaceComplex, cyc: Sequence[int]) -> None:
    n = len(cyc)
    if n < 3 or len(set(cyc)) != n:
        raise ValueError(f"cut cycle {tuple(cyc)} is not simple")
    for i in range(n):
        if not c.has_edge(cyc[i], cyc[(i + 1) % n]):
            raise ValueError(f"cut cycle {tuple(cyc)} uses non-edge {cyc[i], cyc[(i + 1) % n]}")


@dataclass
class Piece:
    complex: SurfaceComplex
    to_original: dict[int, int]
    before: Orientation = field(default=None)  # type: ignore[assignment]
    after: Orientation = field(default=None)  # type: ignore[assignment]


def cut_along(c: SurfaceComplex, cycles: Sequence[Sequence[int]]) -> list[Piece]:
    """Cut ``c`` along disjoint simple cycles; return face-connected pieces."""
    for cyc in cycles:
        _check_cycle(c, cyc)
    allv = [v for cyc in cycles for v in cyc]
    if len(allv) != len(set(allv)):
        raise ValueError("cut cycles intersect; only vertex-disjoint cuts are supported")
    if set(allv) & c.boundary_vertices:
        raise ValueError("cut cycles must avoid the boundary of the complex")
    order = coherent_faces(c)
    nxt_id = max(c.vertices) + 1
    relabel: dict[tuple[Face, int], int] = {}
    to_orig: dict[int, int] = {v: v for v in c.vertices}
    for cyc in cycles:
        n = len(cyc)
        for i, v in enumerate(cyc):
            prev, nxt = cyc[i - 1], cyc[(i + 1) % n]
            succ: dict[int, tuple[int, Face]] = {}
            for f in c.vertex_faces[v]:
                a, b, d = order[f]
                rot = (a, b, d) if a == v else (b, d, a) if b == v else (d, a, b)
                succ[rot[1]] = (rot[2], f)
            left: set[Face] = set()
            x = nxt
            while x != prev:
                if x not in succ:
                    raise ValueError(f"cut cycle leaves the surface at vertex {v}")
                y, f = succ[x]
                left.add(f)
                x = y
                if len(left) > len(succ):
                    raise ValueError(f"cut cycle not two-sided at vertex {v}")
            copy = nxt_id
            nxt_id += 1
            to_orig[copy] = v
            for f in left:
                relabel[(f, v)] = copy
    new_faces = []
    for f in c.faces:
        new_faces.append(tuple(relabel.get((f, v), v) for v in f))
    # face components across shared (relabelled) edges
    efaces: dict[Edge, list[int]] = defaultdict(list)
    for i, f in enumerate(new_faces):
        for e in face_edges(f):
            efaces[e].append(i)
    comp = [-1] * len(new_faces)
    pieces = []
    for i in range(len(new_faces)):
        if comp[i] >= 0:
            continue
        k = len(pieces)
        comp[i] = k
        members = [i]
        q = [i]
        while q:
            j = q.pop()
            for e in face_edges(new_faces[j]):
                for t in efaces[e]:
                    if comp[t] < 0:
                        comp[t] = k
                        members.append(t)
                        q.append(t)
        fs = [new_faces[j] for j in members]
        pc = SurfaceComplex.from_faces(fs, "disk")
        nb = len(pc.boundary_cycles)
        kind = {1: "disk", 2: "annulus"}.get(nb, "sphere_minus_disks")
        pc = SurfaceComplex(pc.vertices, pc.edges, pc.faces, pc.boundary_cycles, kind)
        pieces.append(Piece(pc, {v: to_orig[v] for v in pc.vertices}))
    return pieces


def _orient_by_cuts(c: SurfaceComplex, cycles: Sequence[Sequence[int]]) -> tuple[Orientation, CutSystem, list[Piece]]:
    pieces = cut_along(c, cycles)
    cyc_tail: dict[Edge, int] = {}
    for cyc in cycles:
        n = len(cyc)
        for i in range(n):
            cyc_tail[edge_key(cyc[i], cyc[(i + 1) % n])] = cyc[i]
    tail: dict[Edge, int] = {}
    for p in pieces:
        pc = p.complex
        rep = validate(pc)
        if pc.kind not in ("disk", "annulus") or not rep:
            raise ValueError(
                f"cut does not split the surface into disks and annuli (piece kind {pc.kind}, "
                f"{len(pc.boundary_cycles)} boundary cycles, issues {rep.messages()[:2]})"
            )
        cap = {v: 2 if v in pc.boundary_vertices else 3 for v in pc.vertices}
        before = bounded_orientation(pc.vertices, pc.edges, cap)
        after = dict(before)
        back = p.to_original
        for e in pc.edges:
            oe = edge_key(back[e[0]], back[e[1]])
            if oe in cyc_tail:
                # same direction on both copies of a cut cycle
                after[e] = e[0] if back[e[0]] == cyc_tail[oe] else e[1]
            else:
                tail[oe] = back[after[e]]
        p.before, p.after = Orientation(before), Orientation(after)
        for e in pc.edges:
            oe = edge_key(back[e[0]], back[e[1]])
            if oe in cyc_tail:
                tail[oe] = cyc_tail[oe]
    missing = [e for e in c.edges if e not in tail]
    if missing:
        raise AssertionError(f"edges lost while gluing pieces: {missing[:3]}")
    layering = tuple(
        tuple(sorted(tuple(sorted(p.to_original[v] for v in f)) for f in p.complex.faces)) for p in pieces
    )
    return Orientation(tail), CutSystem(tuple(tuple(cyc) for cyc in cycles), layering), pieces


def _induced_cycle(c: SurfaceComplex, vs: set[int]) -> tuple[int, ...] | None:
    if len(vs) < 3:
        return None
    nbrs = {v: [w for w in c.adjacency[v] if w in vs] for v in vs}
    if any(len(ns) != 2 for ns in nbrs.values()):
        return None
    start = min(vs)
    cyc = [start]
    prev, cur = start, min(nbrs[start])
    while cur != start:
        cyc.append(cur)
        a, b = nbrs[cur]
        prev, cur = cur, (b if a == prev else a)
    return tuple(cyc) if len(cyc) == len(vs) else None


def _levels(c: SurfaceComplex, roots: Iterable[int]) -> list[set[int]]:
    dist = {v: 0 for v in roots}
    q = deque(sorted(dist))
    while q:
        v = q.popleft()
        for w in c.adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    levels: list[set[int]] = [set() for _ in range(max(dist.values()) + 1)]
    for v, d in dist.items():
        levels[d].add(v)
    return levels


def _pieces_ok(c: SurfaceComplex, cycles) -> bool:
    try:
        pieces = cut_along(c, cycles)
    except ValueError:
        return False
    return all(p.complex.kind in ("disk", "annulus") and validate(p.complex) for p in pieces)


def _greedy_cuts(c: SurfaceComplex, candidates: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    if _pieces_ok(c, candidates):
        return tuple(candidates)
    chosen: list[tuple[int, ...]] = []
    for cyc in candidates:
        if _pieces_ok(c, chosen + [cyc]):
            chosen.append(cyc)
    return tuple(chosen)


def layering_cuts(c: SurfaceComplex) -> tuple[tuple[int, ...], ...]:
    """Nested cut cycles for a complex with at most two boundary cycles.

    Disks are layered around a root face (lowest-index face whose corners
    are all interior); annuli around their first boundary cycle. Each level
    set of the BFS distance that induces a simple cycle away from the
    boundary becomes a cut.
    """
    bv = c.boundary_vertices
    if c.kind == "disk":
        root = next((f for f in c.faces if not (set(f) & bv)), None)
        if root is None:
            return ()
        levels = _levels(c, root)
    elif c.kind in ("annulus", "cylinder_truncated"):
        levels = _levels(c, c.boundary_cycles[0])[1:]
    else:
        raise ValueError(f"layering is defined for disks and annuli, not {c.kind}")
    cands = []
    for lv in levels:
        if lv & bv:
            continue
        cyc = _induced_cycle(c, lv)
        if cyc is not None:
            cands.append(cyc)
    return _greedy_cuts(c, cands)


def torus_cut(c: SurfaceComplex) -> tuple[int, ...]:
    """A non-separating simple cycle from a tree-cotree decomposition.

    Among the fundamental cycles of the leftover edges, the shortest one
    (ties broken lexicographically after rotating to start at its minimum)
    is returned.
    """
    root = c.vertices[0]
    parent = {root: root}
    depth = {root: 0}
    q = deque([root])
    tree: set[Edge] = set()
    while q:
        v = q.popleft()
        for w in c.adjacency[v]:
            if w not in parent:
                parent[w], depth[w] = v, depth[v] + 1
                tree.add(edge_key(v, w))
                q.append(w)
    seen = {c.faces[0]}
    q = deque([c.faces[0]])
    cotree: set[Edge] = set()
    while q:
        f = q.popleft()
        for e in face_edges(f):
            if e in tree:
                continue
            for g in c.edge_faces[e]:
                if g not in seen:
                    seen.add(g)
                    cotree.add(e)
                    q.append(g)
    leftover = [e for e in c.edges if e not in tree and e not in cotree]
    if not leftover:
        raise ValueError("no non-separating cycle: surface has genus zero")
    best = None
    for u, w in leftover:
        a, b = [u], [w]
        while a[-1] != b[-1]:
            if depth[a[-1]] >= depth[b[-1]]:
                a.append(parent[a[-1]])
            else:
                b.append(parent[b[-1]])
        cyc = a + b[-2::-1]
        i = cyc.index(min(cyc))
        cyc = cyc[i:] + cyc[:i]
        if cyc[1] > cyc[-1]:
            cyc = [cyc[0]] + cyc[:0:-1]
        key = (len(cyc), cyc)
        if best is None or key < best:
            best = key
    return tuple(best[1])


def orient_pieces(c: SurfaceComplex, cut: CutSystem) -> list[Piece]:
    """Pieces with their per-piece orientations before and after cycle reorientation."""
    return _orient_by_cuts(c, cut.cycles)[2]


def orient_surface(c: SurfaceComplex, cut: CutSystem | None = None) -> tuple[Orientation, CutSystem]:
    """Orientation with outdegree at most 5 everywhere, plus the cut system used.

    With no cut supplied: disks and spheres with holes are oriented directly
    (they are planar), annuli and truncated cylinders are layered along
    their interior rings, a torus is cut open along one non-separating
    cycle.
    """
    if cut is None:
        if c.kind in ("disk", "sphere_minus_disks"):
            o = orient_planar(c)
            return o, CutSystem((), (c.faces,))
        if c.kind in ("annulus", "cylinder_truncated"):
            cycles = layering_cuts(c)
        elif c.kind == "torus":
            cycles = (torus_cut(c),)
        else:
            raise ValueError(f"unsupported kind {c.kind!r}")
    else:
        cycles = cut.cycles
    o, cs, _ = _orient_by_cuts(c, cycles)
    _, mx = outdegree_profile(c, o)
    assert mx <= 5, f"surface outdegree bound violated: {mx}"
    return o, cs
