"""Line-oriented text formats for complexes, orientations, refinements,
families and metrics. Writers are deterministic (sorted output, ``repr``
floats) so a write/read/write cycle is byte-identical. ``#`` starts a
comment in every format.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping

from .complex import KINDS, SurfaceComplex, edge_key
from .families import Connecting, Explicit, PathFamily
from .orientation import Orientation
from .refinement import RefinementMap, make_map


class FormatError(ValueError):
    pass


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def _ints(n: int, toks: Iterable[str]) -> list[int]:
    try:
        out = [int(t) for t in toks]
    except ValueError:
        raise FormatError(f"line {n}: expected integers, got {' '.join(toks)!r}") from None
    if any(v < 0 for v in out):
        raise FormatError(f"line {n}: vertex ids must be nonnegative")
    return out


# -- complex ------------------------------------------------------------------


def write_complex(c: SurfaceComplex) -> str:
    out = [f"kind {c.kind}"]
    out += [f"f {a} {b} {d}" for a, b, d in c.faces]
    in_faces = {v for f in c.faces for v in f}
    face_edges = {e for e, fs in c.edge_faces.items() if fs}
    out += [f"e {u} {v}" for u, v in c.edges if (u, v) not in face_edges]
    out += [f"v {v}" for v in c.vertices if v not in in_faces and not c.adjacency[v]]
    return "\n".join(out) + "\n"


def read_complex(text: str) -> SurfaceComplex:
    kind = None
    faces, edges, verts = [], [], []
    for n, toks in _lines(text):
        tag = toks[0]
        if tag == "kind":
            if len(toks) != 2 or toks[1] not in KINDS:
                raise FormatError(f"line {n}: kind must be one of {KINDS}")
            kind = toks[1]
        elif tag == "f":
            if len(toks) != 4:
                raise FormatError(f"line {n}: face needs three vertices")
            faces.append(tuple(_ints(n, toks[1:])))
        elif tag == "e":
            if len(toks) != 3:
                raise FormatError(f"line {n}: edge needs two vertices")
            edges.append(tuple(_ints(n, toks[1:])))
        elif tag == "v":
            verts += _ints(n, toks[1:])
        else:
            raise FormatError(f"line {n}: unknown record {tag!r}")
    if kind is None:
        raise FormatError("missing 'kind' header")
    for f in faces:
        if len(set(f)) != 3:
            raise FormatError(f"degenerate face {f}")
    for e in edges:
        if e[0] == e[1]:
            raise FormatError(f"self-loop {e}")
    return SurfaceComplex.from_faces(faces, kind, extra_edges=edges, extra_vertices=verts)


# -- orientation --------------------------------------------------------------


def write_orientation(o: Orientation) -> str:
    return "".join(f"{t} {h}\n" for t, h in o.arcs())


def read_orientation(text: str) -> Orientation:
    tail = {}
    for n, toks in _lines(text):
        if len(toks) != 2:
            raise FormatError(f"line {n}: expected '<tail> <head>'")
        t, h = _ints(n, toks)
        e = edge_key(t, h)
        if e in tail:
            raise FormatError(f"line {n}: edge {e} oriented twice")
        tail[e] = t
    return Orientation(tail)


# -- refinement ---------------------------------------------------------------


def write_refinement(m: RefinementMap) -> str:
    out = [f"iota {v} {m.iota[v]}" for v in sorted(m.iota)]
    for e in sorted(m.edge_paths):
        out.append(f"epath {e[0]} {e[1]} : " + " ".join(map(str, m.edge_paths[e])))
    return "\n".join(out) + "\n" + write_complex(m.refined)


def read_refinement(text: str, source: SurfaceComplex) -> RefinementMap:
    iota, paths = {}, {}
    rest = []
    for n, toks in _lines(text):
        if toks[0] == "iota":
            if len(toks) != 3:
                raise FormatError(f"line {n}: expected 'iota <v> <v'>'")
            v, w = _ints(n, toks[1:])
            iota[v] = w
        elif toks[0] == "epath":
            if len(toks) < 6 or toks[3] != ":":
                raise FormatError(f"line {n}: expected 'epath <a> <b> : <v0> ... <vk>'")
            a, b = _ints(n, toks[1:3])
            p = _ints(n, toks[4:])
            paths[edge_key(a, b)] = tuple(p) if a < b else tuple(p[::-1])
        else:
            rest.append(" ".join(toks))
    refined = read_complex("\n".join(rest))
    return make_map(source, refined, iota, paths)


# -- families -----------------------------------------------------------------


def write_family(fam: PathFamily) -> str:
    if isinstance(fam, Connecting):
        return (
            "connect\n"
            + "S: " + " ".join(map(str, sorted(fam.source))) + "\n"
            + "T: " + " ".join(map(str, sorted(fam.target))) + "\n"
        )
    return "explicit\n" + "".join(" ".join(map(str, p)) + "\n" for p in fam.paths)


def read_family(text: str) -> PathFamily:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty family file")
    n0, head = lines[0]
    if head == ["connect"]:
        sides = {}
        for n, toks in lines[1:]:
            if toks[0] not in ("S:", "T:"):
                raise FormatError(f"line {n}: expected 'S:' or 'T:'")
            sides[toks[0]] = _ints(n, toks[1:])
        if set(sides) != {"S:", "T:"}:
            raise FormatError("connect family needs both S: and T: lines")
        return Connecting(sides["S:"], sides["T:"])
    if head == ["explicit"]:
        paths = [tuple(_ints(n, toks)) for n, toks in lines[1:]]
        if not paths:
            raise FormatError("explicit family has no paths")
        return Explicit(paths)
    raise FormatError(f"line {n0}: expected 'connect' or 'explicit'")


# -- metrics ------------------------------------------------------------------


def write_metric(m: Mapping) -> str:
    out = []
    for k in sorted(m):
        if isinstance(k, tuple):
            out.append(f"{k[0]} {k[1]} {m[k]!r}")
        else:
            out.append(f"{k} {m[k]!r}")
    return "\n".join(out) + "\n"


def read_metric(text: str) -> dict:
    out = {}
    for n, toks in _lines(text):
        try:
            w = float(toks[-1])
        except ValueError:
            raise FormatError(f"line {n}: bad weight {toks[-1]!r}") from None
        if w < 0:
            raise FormatError(f"line {n}: weights must be nonnegative")
        if len(toks) == 2:
            out[_ints(n, toks[:1])[0]] = w
        elif len(toks) == 3:
            out[edge_key(*_ints(n, toks[:2]))] = w
        else:
            raise FormatError(f"line {n}: expected '<vertex> <weight>' or '<u> <v> <weight>'")
    return out


def load(path: str | Path, reader, *args):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"{p}: {exc.strerror}") from None
    try:
        return reader(text, *args)
    except FormatError as exc:
        raise FormatError(f"{p}: {exc}") from None
