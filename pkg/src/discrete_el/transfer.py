"""Moving metrics and paths between a complex and its refinement.

Coarse to fine and back:

* ``pushdown_metric`` turns a metric on the refined complex into one on the
  source by taking, at each source vertex, the largest weight among its own
  image and the vertices attached to its edges. Each attached vertex feeds
  two source vertices, so the area at most doubles.
* ``shadow_up`` lays a source path along the refined edge paths; its length
  grows by at most a factor ``1 + b``.
* ``lift_metric`` gives every attached vertex the weight of the tail of its
  edge under a bounded-outdegree orientation, and zero to face interiors.
* ``shadow_down`` walks a refined path and records, for each step, the
  source vertex whose weight the lifted metric charged, so both lengths
  agree exactly.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Mapping, Sequence

from .complex import SurfaceComplex
from .elsolver import ELResult, extremal_length
from .families import Connecting, PathFamily, membership, refine_family
from .orientation import Orientation
from .refinement import RefinementMap, refine_levels


def pushdown_metric(mu: Mapping[int, float], m: RefinementMap) -> dict[int, float]:
    theta = {}
    eps = m.eps
    for v in m.source.vertices:
        w = mu.get(m.iota[v], 0.0)
        for x in eps[v]:
            w = max(w, mu.get(x, 0.0))
        theta[v] = w
    return theta


def shadow_up(gamma: Sequence[int], m: RefinementMap) -> tuple[int, ...]:
    gamma = tuple(gamma)
    if not gamma:
        raise ValueError("empty path")
    out = [m.iota[gamma[0]]]
    for v, w in zip(gamma, gamma[1:]):
        if v == w:
            out.append(m.iota[w])
        else:
            out.extend(m.path(v, w)[1:])
    return tuple(out)


def lift_metric(theta: Mapping[int, float], o: Orientation, m: RefinementMap) -> dict[int, float]:
    mu = {w: 0.0 for w in m.refined.vertices}
    for v in m.source.vertices:
        mu[m.iota[v]] = theta.get(v, 0.0)
    for e, ws in m.attached.items():
        t = theta.get(o.tail_of[e], 0.0)
        for w in ws:
            mu[w] = t
    return mu


def shadow_down(
    gamma_r: Sequence[int],
    o: Orientation,
    m: RefinementMap,
    fam: PathFamily | None = None,
) -> tuple[int, ...]:
    """Shadow of a refined path on the source complex ("move to the base of the arrow").

    Face-interior vertices are skipped, images of source vertices map to
    themselves and attached vertices map to the tail of their edge. A path
    that starts on an attached vertex therefore starts at that tail.

    If ``fam`` (a source family) is given, ``gamma_r`` must belong to its
    refinement and the shadow is checked to belong to ``fam``.
    """
    gamma_r = tuple(gamma_r)
    if fam is not None and not membership(gamma_r, refine_family(fam, m), m.refined):
        raise ValueError(f"{gamma_r[:8]}... is not in the refined family")
    pre, att = m.preimage, m.attached_to
    out: list[int] = []
    for w in gamma_r:
        if w in pre:
            out.append(pre[w])
        elif w in att:
            out.append(o.tail_of[att[w]])
    if not out:
        raise ValueError("refined path never meets a source vertex or an attached vertex")
    gamma = tuple(out)
    if not m.source.is_path(gamma):
        raise AssertionError(f"shadow {gamma} is not a path in the source complex")
    if fam is not None and not membership(gamma, fam, m.source):
        raise AssertionError(f"shadow {gamma} left the family")
    return gamma


@dataclass
class BoundReport:
    b: int
    el_coarse: ELResult
    el_fine: ELResult
    k_forward: float
    k_backward: float
    slack: float
    passed: bool
    tight_forward: bool

    @property
    def k(self) -> float:
        return max(self.k_forward, self.k_backward)

    @property
    def ratio(self) -> float:
        """EL(source family) / EL(refined family)."""
        if not (self.el_coarse.finite and self.el_fine.finite):
            return math.nan
        return self.el_coarse.value / self.el_fine.value

    @property
    def converged(self) -> bool:
        return self.el_coarse.converged and self.el_fine.converged


def check_bounds(b: int, coarse: ELResult, fine: ELResult) -> BoundReport:
    kf, kb = 2.0 * (b + 1) ** 2, 1.0 + 5.0 * b
    slack = coarse.width + fine.width
    if coarse.finite and fine.finite:
        # equality cases (b = 0) need room for a few ulps of rounding
        slack += 64 * sys.float_info.epsilon * max(coarse.value, fine.value)
    if coarse.finite != fine.finite:
        return BoundReport(b, coarse, fine, kf, kb, slack, False, False)
    if not coarse.finite:
        return BoundReport(b, coarse, fine, kf, kb, slack, True, True)
    ok = fine.value <= kf * coarse.value + slack and coarse.value <= kb * fine.value + slack
    tight = fine.value <= (b + 1) ** 2 * coarse.value + slack
    return BoundReport(b, coarse, fine, kf, kb, slack, ok, tight)


def verify_theorem3(
    c: SurfaceComplex,
    fam: Connecting,
    scheme: str,
    levels: int = 1,
    tol: float = 1e-10,
    refinement: RefinementMap | None = None,
) -> BoundReport:
    """Solve both extremal lengths and test the two distortion bounds.

    Forward constant ``2(b+1)^2`` bounds EL(refined)/EL(source), backward
    constant ``1+5b`` bounds EL(source)/EL(refined); both sides are allowed
    the combined bracket widths plus a rounding floor as slack.
    """
    m = refinement if refinement is not None else refine_levels(c, scheme, levels)
    coarse = extremal_length(c, fam, tol)
    fine = extremal_length(m.refined, refine_family(fam, m), tol)
    return check_bounds(m.b, coarse, fine)
