"""Polar duality, gauges and containment tests.

Bodies given as point lists are handled through small LPs, so nothing here
needs a hull unless extreme points are explicitly required.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import HPolytope, OriginNotInterior, VPolytope, as_vec, tolerance
from .hull import convex_hull
from .lp import LpProblem, LpStatus, basic_feasible_solution, solve


@dataclass(frozen=True)
class GaugeValue:
    value: float
    witness: Optional[np.ndarray] = None  # weights w >= 0 with sum(w) = value, w @ Q = x


def polar_of_hrep(H: HPolytope, eps: float | None = None) -> VPolytope:
    """conv{a_i / b_i}; point i is tagged with halfspace index i."""
    eps = tolerance(eps)
    Hn = H.normalized()
    bad = np.nonzero(Hn.b <= eps)[0]
    if bad.size:
        raise OriginNotInterior(f"origin not strictly inside halfspace(s) {bad.tolist()}")
    return VPolytope(H.A / H.b[:, None], tags=tuple(range(len(H))))


def origin_is_interior(Q: VPolytope, eps: float | None = None, hull=None) -> bool:
    eps = tolerance(eps)
    h = convex_hull(Q.points) if hull is None else hull
    return all(f.offset > eps for f in h.facets)


def polar_of_vrep(V: VPolytope, eps: float | None = None) -> HPolytope:
    """{x : v.x <= 1} over the extreme points v, each row tagged with its point index."""
    eps = tolerance(eps)
    h = convex_hull(V.points)
    if not origin_is_interior(V, eps, h):
        raise OriginNotInterior("origin is not interior to the point hull")
    idx = list(h.extreme_indices)
    return HPolytope(V.points[idx], np.ones(len(idx)), tags=tuple(idx))


def gauge(Q: VPolytope, x) -> GaugeValue:
    """min{t >= 0 : x in t conv(Q)}; +inf when x is outside the cone of Q."""
    x = as_vec(x, Q.dim)
    if not np.any(x):
        return GaugeValue(0.0, np.zeros(len(Q)))
    P = np.asarray(Q.points)
    res = solve(LpProblem(np.ones(len(P)), A_eq=P.T, b_eq=x))
    if res.status is LpStatus.INFEASIBLE:
        return GaugeValue(float("inf"))
    if not res.optimal:
        raise RuntimeError(f"gauge LP failed: {res.status}")
    return GaugeValue(max(res.value, 0.0), res.x)


def contains(Q: VPolytope, x, eps: float | None = None) -> bool:
    """Whether x is a convex combination of Q's points (within eps)."""
    eps = tolerance(eps)
    x = as_vec(x, Q.dim)
    P = np.asarray(Q.points)
    E = np.vstack([P.T, np.ones(len(P))])
    f = np.append(x, 1.0)
    res = basic_feasible_solution(E, f)
    if not res.optimal:
        return False
    scale = max(1.0, float(np.max(np.abs(E))), float(np.max(np.abs(f))))
    return bool(np.max(np.abs(E @ res.x - f)) <= 10 * eps * scale)


def symmetry_constant(Q: VPolytope, eps: float | None = None) -> float:
    """Smallest lambda with Q contained in -lambda Q."""
    eps = tolerance(eps)
    h = convex_hull(Q.points)
    if not origin_is_interior(Q, eps, h):
        raise OriginNotInterior("symmetry constant needs the origin in the interior")
    return max(gauge(Q, -Q.points[i]).value for i in h.extreme_indices)
