"""Path families: connecting families, explicit lists, regularity and refinement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence, Union

from .complex import Face, SurfaceComplex, edge_key, face_edges
from .refinement import RefinementMap

Path = tuple[int, ...]


@dataclass(frozen=True)
class Connecting:
    """All vertex paths that start in ``source`` and end in ``target``."""

    source: frozenset[int]
    target: frozenset[int]

    def __init__(self, source: Iterable[int], target: Iterable[int]):
        object.__setattr__(self, "source", frozenset(source))
        object.__setattr__(self, "target", frozenset(target))

    def check(self, c: SurfaceComplex) -> None:
        if not self.source or not self.target:
            raise ValueError("connecting family needs nonempty source and target")
        if self.source & self.target:
            raise ValueError(f"source and target overlap at {sorted(self.source & self.target)[:5]}")
        unknown = (self.source | self.target) - set(c.vertices)
        if unknown:
            raise ValueError(f"family mentions unknown vertices {sorted(unknown)[:5]}")


@dataclass(frozen=True)
class Explicit:
    paths: tuple[Path, ...]

    def __init__(self, paths: Iterable[Sequence[int]]):
        ps = tuple(tuple(p) for p in paths)
        if not ps:
            raise ValueError("a path family must be nonempty")
        object.__setattr__(self, "paths", ps)

    def check(self, c: SurfaceComplex) -> None:
        for p in self.paths:
            if not c.is_path(p):
                raise ValueError(f"{p} is not a vertex path in the complex")


PathFamily = Union[Connecting, Explicit]


def membership(path: Sequence[int], fam: PathFamily, c: SurfaceComplex | None = None) -> bool:
    path = tuple(path)
    if c is not None and not c.is_path(path):
        return False
    if isinstance(fam, Connecting):
        return bool(path) and path[0] in fam.source and path[-1] in fam.target
    return path in set(fam.paths)


def simple_paths(c: SurfaceComplex, fam: Connecting, limit: int = 12) -> Iterator[Path]:
    """Every simple path from ``S`` to ``T`` that meets ``T`` only at its end."""
    if c.n_vertices > limit:
        raise ValueError(f"enumeration guard: complex has {c.n_vertices} > {limit} vertices")
    adj = c.adjacency
    tgt = fam.target
    for s in sorted(fam.source):
        stack = [(s, (s,))]
        while stack:
            v, p = stack.pop()
            if v in tgt:
                yield p
                continue
            for w in reversed(adj[v]):
                if w not in p:
                    stack.append((w, p + (w,)))


def enumerate_family(c: SurfaceComplex, fam: Connecting, limit: int = 12) -> Explicit:
    return Explicit(sorted(simple_paths(c, fam, limit)))


def _triangles(c: SurfaceComplex) -> list[Face]:
    if c.faces:
        return list(c.faces)
    adj = c.adjacency
    out = []
    for u, v in c.edges:
        for w in adj[v]:
            if w > v and c.has_edge(u, w):
                out.append((u, v, w))
    return out


def surrounded_triangles(c: SurfaceComplex, paths: Iterable[Path]) -> list[Face]:
    """Triangles all three of whose sides are traversed somewhere in ``paths``."""
    used = set()
    for p in paths:
        for x, y in zip(p, p[1:]):
            if x != y:
                used.add(edge_key(x, y))
    return [f for f in _triangles(c) if all(e in used for e in face_edges(f))]


@dataclass
class RegularityResult:
    regular: bool
    witness: Path | None = None
    rule: str | None = None

    def __bool__(self) -> bool:
        return self.regular


def is_regular(
    c: SurfaceComplex, fam: Explicit, within: PathFamily | Callable[[Path], bool] | None = None
) -> RegularityResult:
    """Check detour closure over surrounded triangles and splice closure at shared vertices.

    Detours and splices built from ``fam`` must be members of ``within``
    (default: ``fam`` itself). A finite enumeration of a connecting family
    is checked against the connecting family, since splicing two simple
    paths can revisit a vertex.
    """
    if within is None:
        within = fam
    if callable(within):
        member = within
    elif isinstance(within, Explicit):
        pool = set(within.paths)
        member = pool.__contains__
    else:
        member = lambda p: membership(p, within)  # noqa: E731
    paths = list(fam.paths)
    tris = surrounded_triangles(c, paths)
    third: dict[tuple[int, int], list[int]] = {}
    for f in tris:
        for e in face_edges(f):
            (z,) = set(f) - set(e)
            third.setdefault(e, []).append(z)
    for p in paths:
        for i in range(len(p) - 1):
            a, b = p[i], p[i + 1]
            if a == b:
                continue
            for z in third.get(edge_key(a, b), ()):
                q = p[: i + 1] + (z,) + p[i + 1 :]
                if not member(q):
                    return RegularityResult(False, q, "detour")
    # a splice at v is (prefix ending at v) + (tail after v); distinct pieces suffice
    heads: dict[int, set[Path]] = {}
    tails: dict[int, set[Path]] = {}
    for p in paths:
        for i, v in enumerate(p):
            heads.setdefault(v, set()).add(p[: i + 1])
            tails.setdefault(v, set()).add(p[i + 1 :])
    for v in sorted(heads):
        for h in sorted(heads[v]):
            for t in sorted(tails[v]):
                q = h + t
                if not member(q):
                    return RegularityResult(False, q, "splice")
    return RegularityResult(True)


def refine_family(fam: PathFamily, m: RefinementMap) -> PathFamily:
    """The refined family on ``m.refined``.

    For a connecting family each side grows by the vertices attached to
    source edges with both endpoints on that side.
    """
    if isinstance(fam, Explicit):
        if m.b != 0 or any(m.face_interior.values()):
            raise ValueError("explicit families are only refined under the identity refinement")
        return Explicit(tuple(m.iota[v] for v in p) for p in fam.paths)

    def side(vs: frozenset[int]) -> set[int]:
        out = {m.iota[v] for v in vs}
        for e, ws in m.attached.items():
            if e[0] in vs and e[1] in vs:
                out.update(ws)
        return out

    return Connecting(side(fam.source), side(fam.target))


def in_refined_family(
    gamma_r: Sequence[int], m: RefinementMap, surrounded: Iterable[Face]
) -> bool:
    """Segment-decomposition test: split ``gamma_r`` into consecutive runs that
    each stay within the closure of one surrounded source triangle."""
    gamma_r = tuple(gamma_r)
    if not gamma_r or not m.refined.is_path(gamma_r):
        return False
    closures = [m.closure(f) for f in surrounded]
    n = len(gamma_r)
    # reach[i]: prefix of length i decomposes
    reach = [False] * (n + 1)
    reach[0] = True
    for i in range(n):
        if not reach[i]:
            continue
        for cl in closures:
            j = i
            while j < n and gamma_r[j] in cl:
                j += 1
                reach[j] = True
    return reach[n]


def boundary_family(c: SurfaceComplex, i: int = 0, j: int = 1) -> Connecting:
    """Paths joining boundary cycle ``i`` to boundary cycle ``j``."""
    return Connecting(c.boundary_cycles[i], c.boundary_cycles[j])
