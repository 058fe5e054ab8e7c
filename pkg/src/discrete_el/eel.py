"""Edge extremal length: weights on edges instead of vertices."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .complex import Edge, SurfaceComplex, edge_key
from .elsolver import ELResult, ordered_bracket, prune_dominated, cutting_plane, normalized, projected_gradient_min_norm
from .families import Connecting, refine_family, simple_paths
from .refinement import RefinementMap, refine_levels

EdgeMetric = Mapping[Edge, float]


def edge_path(vertex_path: Sequence[int]) -> tuple[Edge, ...]:
    """Edges traversed by a vertex path; stationary steps contribute nothing."""
    return tuple(edge_key(a, b) for a, b in zip(vertex_path, vertex_path[1:]) if a != b)


def is_edge_path(c: SurfaceComplex, edges: Sequence[Edge]) -> bool:
    if not edges or any(e not in c.edge_set for e in edges):
        return False
    return all(set(e) & set(f) for e, f in zip(edges, edges[1:]))


def edge_path_length(w: EdgeMetric, edges: Sequence[Edge]) -> float:
    total = 0.0
    for e in edges:
        total += w.get(e, 0.0)
    return total


def edge_area(w: EdgeMetric) -> float:
    return math.fsum(x * x for x in w.values())


def edge_dijkstra(c: SurfaceComplex, w: EdgeMetric, sources) -> tuple[dict[int, float], dict[int, int]]:
    dist: dict[int, float] = {}
    pred: dict[int, int] = {}
    heap = [(0.0, s, s) for s in sorted(set(sources))]
    heapq.heapify(heap)
    adj = c.adjacency
    while heap:
        d, v, p = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v], pred[v] = d, p
        for u in adj[v]:
            if u not in dist:
                heapq.heappush(heap, (d + w.get(edge_key(v, u), 0.0), u, v))
    return dist, pred


def _trace(pred, t):
    p = [t]
    while pred[p[-1]] != p[-1]:
        p.append(pred[p[-1]])
    return tuple(p[::-1])


def edge_family_length(c: SurfaceComplex, w: EdgeMetric, fam: Connecting) -> tuple[float, tuple[Edge, ...] | None]:
    fam.check(c)
    dist, pred = edge_dijkstra(c, w, fam.source)
    reached = [(dist[t], t) for t in sorted(fam.target) if t in dist]
    if not reached:
        return math.inf, None
    d, t = min(reached)
    return d, edge_path(_trace(pred, t))


def edge_extremal_length(
    c: SurfaceComplex, fam: Connecting, tol: float = 1e-10, max_iter: int = 2000, cuts_per_round: int = 64
) -> ELResult:
    """Edge extremal length with the same cutting-plane contract as the vertex solver."""
    fam.check(c)

    def separate(w):
        # Best S-to-T walk through each edge, from one tree grown out of S and
        # one grown out of T; many distinct cuts per round keep rounds few.
        d_s, p_s = edge_dijkstra(c, w, fam.source)
        reached = sorted((d_s[t], t) for t in fam.target if t in d_s)
        if not reached:
            return math.inf, []
        d_t, p_t = edge_dijkstra(c, w, fam.target)
        through = []
        for e in c.edges:
            for a, b in (e, e[::-1]):
                if a in d_s and b in d_t:
                    d = d_s[a] + w.get(e, 0.0) + d_t[b]
                    if d < 1.0:
                        through.append((d, a, b))
        through.sort()
        paths: list[tuple[Edge, ...]] = []
        seen = set()
        for _, a, b in through:
            p = edge_path(_trace(p_s, a) + _trace(p_t, b)[::-1])
            if p not in seen:
                seen.add(p)
                paths.append(p)
                if len(paths) >= cuts_per_round:
                    break
        return reached[0][0], paths or [edge_path(_trace(p_s, reached[0][1]))]

    return cutting_plane(list(c.edges), separate, tol, max_iter)


def brute_force_eel(c: SurfaceComplex, fam: Connecting, tol: float = 1e-11, limit: int = 12) -> ELResult:
    if c.n_vertices > limit:
        raise ValueError(f"brute force limited to {limit} vertices, got {c.n_vertices}")
    fam.check(c)
    paths = [edge_path(p) for p in simple_paths(c, fam, limit)]
    if not paths:
        return ELResult(math.inf, math.inf, math.inf, {}, [], 0, True)
    edges = list(c.edges)
    idx = {e: i for i, e in enumerate(edges)}
    rows = []
    for p in paths:
        r = [0] * len(edges)
        for e in p:
            r[idx[e]] += 1
        rows.append(tuple(r))
    A = np.array(prune_dominated(rows), dtype=float)
    x, lo, up = projected_gradient_min_norm(A, tol)
    metric = normalized({e: float(x[i]) for i, e in enumerate(edges)})
    lo, up = ordered_bracket(lo, up)
    return ELResult(0.5 * (lo + up), lo, up, metric, [], 0, up - lo <= tol * up)


@dataclass
class EELReport:
    b: int
    c: int
    eel_coarse: ELResult
    eel_fine: ELResult
    finite_equivalent: bool

    @property
    def ratio(self) -> float:
        if not (self.eel_coarse.finite and self.eel_fine.finite):
            return math.nan
        return self.eel_coarse.value / self.eel_fine.value

    @property
    def passed(self) -> bool:
        return self.finite_equivalent

    @property
    def converged(self) -> bool:
        return self.eel_coarse.converged and self.eel_fine.converged


def verify_theorem4(
    c: SurfaceComplex,
    fam: Connecting,
    scheme: str,
    levels: int = 1,
    tol: float = 1e-10,
    refinement: RefinementMap | None = None,
) -> EELReport:
    """Edge extremal length on both sides of a strongly bounded refinement.

    No distortion constant is asserted; the ratio is measured and only
    finiteness equivalence is checked.
    """
    m = refinement if refinement is not None else refine_levels(c, scheme, levels)
    if m.c is None:
        raise ValueError("refinement is not strongly bounded")
    coarse = edge_extremal_length(c, fam, tol)
    fine = edge_extremal_length(m.refined, refine_family(fam, m), tol)
    return EELReport(m.b, m.c, coarse, fine, coarse.finite == fine.finite)
