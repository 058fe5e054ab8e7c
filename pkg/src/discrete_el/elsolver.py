"""Vertex metrics and extremal length.

Extremal length is computed from the equivalent convex program

    minimize  sum_v m(v)^2   subject to  L_m(gamma) >= 1  for all gamma,

whose optimum area ``A*`` gives ``EL = 1 / A*``. Constraints are generated
lazily: the most violated paths are found by a vertex-weighted shortest
path search and added to a restricted program. The restricted optimum is a
relaxation, so ``1 / area`` is an upper bound, while the current metric's
own ratio ``L^2 / area`` is a lower bound.

A path's length counts every vertex occurrence, the first one included.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from .complex import SurfaceComplex
from .families import Connecting, Explicit, PathFamily, simple_paths

VertexMetric = Mapping[int, float]


@dataclass
class ELResult:
    value: float
    lower: float
    upper: float
    metric: dict
    critical_paths: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = True
    history: list[tuple[float, float]] = field(default_factory=list)

    @property
    def width(self) -> float:
        if math.isinf(self.value):
            return 0.0
        return self.upper - self.lower

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


def area(m: VertexMetric) -> float:
    return math.fsum(w * w for w in m.values())


def is_admissible(m: VertexMetric) -> bool:
    return all(w >= 0 for w in m.values()) and 0 < area(m) < math.inf


def path_length(m: VertexMetric, path: Sequence[int]) -> float:
    total = 0.0
    for v in path:
        total += m.get(v, 0.0)
    return total


def scaled(m: VertexMetric, s: float) -> dict:
    return {v: s * w for v, w in m.items()}


def normalized(m: VertexMetric) -> dict:
    a = area(m)
    if a <= 0:
        raise ValueError("zero metric cannot be normalized")
    return scaled(m, 1.0 / math.sqrt(a))


def ratio(c: SurfaceComplex, m: VertexMetric, fam: PathFamily) -> float:
    """``L_m(fam)^2 / area(m)`` for an admissible metric."""
    L, _ = family_length(c, m, fam)
    return L * L / area(m)


# -- shortest paths -------------------------------------------------------------


def vertex_dijkstra(
    adj: Mapping[int, Sequence[int]], m: VertexMetric, sources: Iterable[int]
) -> tuple[dict[int, float], dict[int, int]]:
    """Multi-source search where entering ``w`` costs ``m(w)`` and starting at ``s`` costs ``m(s)``.

    Ties are settled by vertex id, so repeated calls give identical trees.
    """
    dist: dict[int, float] = {}
    pred: dict[int, int] = {}
    get, push, pop = m.get, heapq.heappush, heapq.heappop
    heap = [(get(s, 0.0), s, s) for s in sorted(set(sources))]
    heapq.heapify(heap)
    while heap:
        d, v, p = pop(heap)
        if v in dist:
            continue
        dist[v] = d
        pred[v] = p
        for w in adj[v]:
            if w not in dist:
                push(heap, (d + get(w, 0.0), w, v))
    return dist, pred


def _trace(pred: Mapping[int, int], t: int) -> tuple[int, ...]:
    path = [t]
    while pred[path[-1]] != path[-1]:
        path.append(pred[path[-1]])
    return tuple(path[::-1])


def family_length(c: SurfaceComplex, m: VertexMetric, fam: PathFamily) -> tuple[float, tuple[int, ...] | None]:
    """Infimum of path lengths over the family, with a shortest member (``inf, None`` if empty)."""
    if isinstance(fam, Explicit):
        best = min(fam.paths, key=lambda p: (path_length(m, p), p))
        return path_length(m, best), best
    fam.check(c)
    dist, pred = vertex_dijkstra(c.adjacency, m, fam.source)
    reached = [(dist[t], t) for t in sorted(fam.target) if t in dist]
    if not reached:
        return math.inf, None
    d, t = min(reached)
    return d, _trace(pred, t)


def _violated_connecting(c: SurfaceComplex, m: VertexMetric, fam: Connecting, cap: int):
    dist, pred = vertex_dijkstra(c.adjacency, m, fam.source)
    reached = sorted((dist[t], t) for t in fam.target if t in dist)
    if not reached:
        return math.inf, []
    L = reached[0][0]
    paths = []
    for d, t in reached[:cap]:
        if d >= 1.0:
            break
        paths.append(_trace(pred, t))
    if not paths:
        paths.append(_trace(pred, reached[0][1]))
    return L, paths


# -- least-distance QP ------------------------------------------------------


def _min_norm_with_dual(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k, n = A.shape
    E = np.vstack([A.T, np.ones((1, k))])
    f = np.zeros(n + 1)
    f[-1] = 1.0
    u, _ = nnls(E, f, maxiter=50 * (n + k + 10))
    r = E @ u - f
    if abs(r[-1]) < 1e-300:
        raise ArithmeticError("least-distance program infeasible")
    return np.maximum(-r[:n] / r[-1], 0.0), u


def min_norm_point(A: np.ndarray) -> np.ndarray:
    """Least-norm ``x`` with ``A x >= 1``, via the NNLS dual of least-distance programming.

    For nonnegative ``A`` the optimum is automatically nonnegative.
    """
    return _min_norm_with_dual(A)[0]


def cutting_plane(
    items: Sequence[Hashable],
    separate: Callable[[dict], tuple[float, list[tuple]]],
    tol: float = 1e-10,
    max_iter: int = 2000,
) -> ELResult:
    """Generic cutting-plane loop over weights on ``items``.

    ``separate(weights)`` returns the family length under ``weights`` and a
    list of paths (sequences of items) to add as constraints.
    """
    index = {x: i for i, x in enumerate(items)}
    zero = {x: 0.0 for x in items}
    L0, first = separate({x: 1.0 for x in items})
    if math.isinf(L0):
        return ELResult(math.inf, math.inf, math.inf, {}, [], 0, True, [])
    active: list[tuple] = []
    seen: set[tuple] = set()
    rows: list[np.ndarray] = []
    history: list[tuple[float, float]] = []
    lower, upper = 0.0, math.inf
    weights = dict(zero)
    new = first
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        added = 0
        for p in new:
            if p in seen:
                continue
            seen.add(p)
            active.append(p)
            row = np.zeros(len(items))
            for x in p:
                row[index[x]] += 1.0
            rows.append(row)
            added += 1
        A = np.array(rows)
        used = np.flatnonzero(A.any(axis=0))
        x = np.zeros(len(items))
        x[used], u = _min_norm_with_dual(A[:, used])
        # slack cuts with zero multiplier do not shape the restricted optimum;
        # forgetting them keeps the QP small and they return if violated again
        slack = (u == 0) & (A @ x > 1.0 + 1e-6)
        if slack.any():
            for i in np.flatnonzero(slack):
                seen.discard(active[i])
            keep = np.flatnonzero(~slack)
            active = [active[i] for i in keep]
            rows = [rows[i] for i in keep]
        weights = dict(zip(items, x.tolist()))
        a = float(x @ x)
        upper = min(upper, 1.0 / a)
        L, new = separate(weights)
        lower = max(lower, L * L / a)
        history.append((L * L / a, 1.0 / a))
        if upper - lower <= tol * upper:
            converged = True
            break
        if added == 0 and all(p in seen for p in new):
            # the separation oracle cannot improve on the restricted optimum
            converged = upper - lower <= 1e3 * tol * upper
            break
    s = 1.0 / math.sqrt(area(weights))
    metric = {k: s * w for k, w in weights.items()}
    Lmu = L * s  # the last separation already measured these weights
    crit = sorted(p for p in active if sum(metric[x] for x in p) <= Lmu * (1 + 1e-7) + 1e-12)
    lower, upper = ordered_bracket(lower, upper)
    value = 0.5 * (lower + upper)
    return ELResult(value, lower, upper, metric, crit, it, converged, history)


def extremal_length(
    c: SurfaceComplex, fam: PathFamily, tol: float = 1e-10, max_iter: int = 2000, cuts_per_round: int = 64
) -> ELResult:
    """Extremal length of ``fam`` with a certified ``[lower, upper]`` bracket."""
    fam.check(c)
    if isinstance(fam, Explicit):
        items = sorted({v for p in fam.paths for v in p})

        def separate(w):
            lens = sorted((path_length(w, p), p) for p in fam.paths)
            viol = [p for L, p in lens if L < 1.0][:cuts_per_round]
            return lens[0][0], viol or [lens[0][1]]

    else:
        items = list(c.vertices)

        def separate(w):
            return _violated_connecting(c, w, fam, cuts_per_round)

    res = cutting_plane(items, separate, tol, max_iter)
    if res.finite:
        res.metric = {v: res.metric.get(v, 0.0) for v in c.vertices}
    return res


def ordered_bracket(lower: float, upper: float) -> tuple[float, float]:
    # both bounds are exact up to rounding; a crossing of a few ulps is noise
    if lower > upper:
        if lower - upper > 1e-12 * upper:
            raise ArithmeticError(f"bracket inverted: lower {lower} > upper {upper}")
        lower, upper = upper, lower
    return lower, upper


# -- brute-force oracle -----------------------------------------------------


def prune_dominated(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Drop duplicate rows and rows that dominate another (their constraint is implied)."""
    uniq = sorted(set(rows), key=lambda r: (sum(r), r))
    keep: list[tuple[int, ...]] = []
    for r in uniq:
        if not any(all(a <= b for a, b in zip(k, r)) for k in keep):
            keep.append(r)
    return keep


def projected_gradient_min_norm(A: np.ndarray, tol: float = 1e-11, max_iter: int = 500_000):
    """Accelerated projected gradient on the dual of ``min |x|^2 s.t. A x >= 1``.

    The dual is ``max 1'l - |A'l|^2 / 2`` over ``l >= 0`` and the primal point
    is ``x = A'l``. Returns ``(x, lower, upper)`` where the bracket is on
    ``EL = 1/|x*|^2``: ``upper`` from weak duality, ``lower`` from the
    feasible rescaling ``x / min(A x)``.
    """
    G = A @ A.T
    # G is entrywise nonnegative, so its largest row sum bounds the top eigenvalue
    Lip = float(G.sum(axis=1).max())
    # start from the clipped solution of "all constraints tight"
    lam = np.maximum(np.linalg.lstsq(G, np.ones(A.shape[0]), rcond=None)[0], 0.0)
    if not lam.any():
        lam = np.full(A.shape[0], 1.0 / Lip)
    y = lam.copy()
    t = 1.0
    lower, upper = 0.0, math.inf
    best = lam
    prev_obj = -math.inf
    for _ in range(max_iter):
        new = np.maximum(y - (G @ y - 1.0) / Lip, 0.0)
        Gn = G @ new  # equals A x for x = A'new
        xx = float(new @ Gn)
        dual = float(new.sum()) - 0.5 * xx
        if dual > 0:
            upper = min(upper, 1.0 / (2.0 * dual))
        s = float(Gn.min())
        if s > 0 and xx > 0 and s * s / xx > lower:
            lower = s * s / xx
            best = new / s
        if upper < math.inf and upper - lower <= tol * upper:
            break
        # restart momentum when the dual objective stops improving
        if dual < prev_obj:
            t = 1.0
            y = new
        else:
            t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            y = new + ((t - 1.0) / t_next) * (new - lam)
            t = t_next
        prev_obj = dual
        lam = new
    return A.T @ best, lower, upper


def _simple_path_masks(c: SurfaceComplex, fam: Connecting) -> list[int]:
    """Vertex-index bitmasks of the chordless S-T paths meeting S and T only at the ends.

    Any other path's vertex set contains one of these, so its constraint is implied.
    """
    idx = {v: i for i, v in enumerate(c.vertices)}
    nbr = [[idx[w] for w in c.adjacency[v]] for v in c.vertices]
    adjm = [sum(1 << w for w in ns) for ns in nbr]
    tgt = {idx[t] for t in fam.target}
    src = 0
    for v in fam.source:
        src |= 1 << idx[v]
    out = []
    for s in sorted(idx[v] for v in fam.source):
        stack = [(s, 1 << s)]
        while stack:
            v, mask = stack.pop()
            if v in tgt:
                out.append(mask)
                continue
            for w in nbr[v]:
                # a chord or a second source vertex would give a shorter path inside this one
                if adjm[w] & mask == 1 << v and not src >> w & 1:
                    stack.append((w, mask | 1 << w))
    return out


def _minimal_masks(masks: list[int]) -> list[int]:
    keep: list[int] = []
    for r in sorted(set(masks), key=lambda m: (m.bit_count(), m)):
        if not any(k & r == k for k in keep):
            keep.append(r)
    return keep


def brute_force_el(c: SurfaceComplex, fam: PathFamily, tol: float = 1e-11, limit: int = 12) -> ELResult:
    """Same program with every simple path enumerated up front; test oracle only."""
    if c.n_vertices > limit:
        raise ValueError(f"brute force limited to {limit} vertices, got {c.n_vertices}")
    fam.check(c)
    verts = list(c.vertices)
    if isinstance(fam, Explicit):
        idx = {v: i for i, v in enumerate(verts)}
        rows = []
        for p in fam.paths:
            r = [0] * len(verts)
            for v in p:
                r[idx[v]] += 1
            rows.append(tuple(r))
        A = np.array(prune_dominated(rows), dtype=float)
    else:
        masks = _minimal_masks(_simple_path_masks(c, fam))
        if not masks:
            return ELResult(math.inf, math.inf, math.inf, {}, [], 0, True)
        A = np.array([[m >> i & 1 for i in range(len(verts))] for m in masks], dtype=float)
    x, lo, up = projected_gradient_min_norm(A, tol)
    metric = normalized({v: float(x[i]) for i, v in enumerate(verts)})
    lo, up = ordered_bracket(lo, up)
    return ELResult(0.5 * (lo + up), lo, up, metric, [], 0, up - lo <= tol * up)
