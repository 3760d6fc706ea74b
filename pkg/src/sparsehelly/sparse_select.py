"""Select at most 2d vertices of Q whose hull Q' satisfies Q ⊆ -(lambda+2) d Q'.

Construction:

1. pick d vertices v_1..v_d spanning a maximal-volume simplex with the origin;
2. every vertex of Q then lies in the parallelotope P = {sum beta_i v_i : |beta_i| <= 1};
3. let u be the mean of the v_i and y the point where the ray through -u leaves Q;
4. write y as a convex combination of at most d vertices of a facet of Q.

Q' is the hull of the simplex vertices and the facet vertices.  The result is
a :class:`SelectionCertificate` that :func:`verify_certificate` re-checks
with membership tests only.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import asdict, dataclass, field
from math import factorial
from typing import Optional, Sequence

import numpy as np

from .core import DegenerateInput, HPolytope, OriginNotInterior, VPolytope, tolerance
from .hull import HullResult, convex_hull
from .lp import basic_feasible_solution
from .polarity import contains, gauge, origin_is_interior

SWAP_TOL = 1e-12
FACET_HIT_TOL = 1e-7


class SimplexMode(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"  # global maximum over all d-subsets
    SWAP = "swap"  # local maximum under single-vertex replacement


@dataclass(frozen=True)
class SimplexChoice:
    indices: tuple[int, ...]
    volume: float
    mode: SimplexMode


@dataclass(frozen=True)
class SelectionCertificate:
    dim: int
    simplex: SimplexChoice
    carath_indices: tuple[int, ...]
    carath_weights: tuple[float, ...]
    u: np.ndarray
    y: np.ndarray
    lambda_measured: float
    lambda_used: float
    factor: float
    qprime_indices: tuple[int, ...]
    direction_fallback: bool = False
    carath_fallback: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["simplex"] = {"indices": list(self.simplex.indices), "volume": self.simplex.volume,
                        "mode": self.simplex.mode.value}
        d["carath_indices"] = list(self.carath_indices)
        d["carath_weights"] = list(self.carath_weights)
        d["qprime_indices"] = list(self.qprime_indices)
        d["u"] = self.u.tolist()
        d["y"] = self.y.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SelectionCertificate":
        s = d["simplex"]
        return cls(
            dim=int(d["dim"]),
            simplex=SimplexChoice(tuple(s["indices"]), float(s["volume"]), SimplexMode(s["mode"])),
            carath_indices=tuple(int(i) for i in d["carath_indices"]),
            carath_weights=tuple(float(w) for w in d["carath_weights"]),
            u=np.asarray(d["u"], dtype=float),
            y=np.asarray(d["y"], dtype=float),
            lambda_measured=float(d["lambda_measured"]),
            lambda_used=float(d["lambda_used"]),
            factor=float(d["factor"]),
            qprime_indices=tuple(int(i) for i in d["qprime_indices"]),
            direction_fallback=bool(d.get("direction_fallback", False)),
            carath_fallback=bool(d.get("carath_fallback", False)),
        )

    def replace(self, **changes) -> "SelectionCertificate":
        kw = {f: getattr(self, f) for f in self.__dataclass_fields__}
        kw.update(changes)
        return SelectionCertificate(**kw)


def _best_subset_exhaustive(P: np.ndarray, cand: Sequence[int], chunk: int = 200_000):
    d = P.shape[1]
    best_det, best = -1.0, None
    it = itertools.combinations(cand, d)
    while True:
        block = np.array(list(itertools.islice(it, chunk)), dtype=int)
        if block.size == 0:
            break
        dets = np.abs(np.linalg.det(P[block]))
        k = int(np.argmax(dets))
        # combinations come in lexicographic order, so the first maximum wins ties
        if dets[k] > best_det * (1 + SWAP_TOL):
            best_det, best = float(dets[k]), tuple(int(i) for i in block[k])
    return best, best_det


def _greedy_basis(P: np.ndarray, cand: Sequence[int]) -> list[int]:
    d = P.shape[1]
    chosen: list[int] = []
    for _ in range(d):
        if chosen:
            Qb, _ = np.linalg.qr(P[chosen].T)
            resid = P[cand] - (P[cand] @ Qb) @ Qb.T
        else:
            resid = P[cand]
        dist = np.linalg.norm(resid, axis=1)
        dist[[cand.index(i) for i in chosen]] = -1.0
        chosen.append(cand[int(np.argmax(dist))])
    return chosen


def _local_swap(P: np.ndarray, cand: Sequence[int], max_swaps: int = 10_000):
    cand = list(cand)
    basis = _greedy_basis(P, cand)
    for _ in range(max_swaps):
        A = P[basis].T
        if abs(np.linalg.det(A)) <= tolerance():
            raise DegenerateInput("greedy basis is singular")
        # replacing v_i by p multiplies |det| by |beta_i(p)| where beta = A^-1 p
        ratio = np.abs(np.linalg.solve(A, P[cand].T))  # (d, n)
        i, k = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        if ratio[i, k] <= 1 + SWAP_TOL:
            break
        basis[i] = cand[k]
    idx = tuple(sorted(basis))
    return idx, float(abs(np.linalg.det(P[list(idx)])))


def max_simplex(Q: VPolytope, mode: SimplexMode | str = SimplexMode.EXHAUSTIVE,
                extreme: Optional[Sequence[int]] = None) -> SimplexChoice:
    """d vertices of Q maximizing the volume of conv{0, v_1, ..., v_d}."""
    mode = SimplexMode(mode)
    P = np.asarray(Q.points)
    d = Q.dim
    cand = sorted(convex_hull(P).extreme_indices if extreme is None else extreme)
    if len(cand) < d:
        raise DegenerateInput("fewer than d extreme points")
    if mode is SimplexMode.EXHAUSTIVE:
        idx, det = _best_subset_exhaustive(P, cand)
    else:
        idx, det = _local_swap(P, cand)
    if idx is None or det <= tolerance():
        raise DegenerateInput("every d-subset of vertices is linearly dependent")
    return SimplexChoice(idx, det / factorial(d), mode)


def parallelotope_P(V) -> tuple[VPolytope, HPolytope]:
    """{sum beta_i v_i : beta in [-1,1]^d} as 2^d corners and as 2d strip inequalities.

    ``V`` holds the vectors v_i as rows.
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    d = V.shape[1]
    if V.shape[0] != d or abs(np.linalg.det(V)) <= tolerance():
        raise DegenerateInput("need d linearly independent vectors")
    A = V.T
    Ainv = np.linalg.inv(A)
    H = HPolytope(np.vstack([Ainv, -Ainv]), np.ones(2 * d))
    if d > 8:
        raise ValueError("corner enumeration limited to d <= 8")
    signs = np.array(list(itertools.product([-1.0, 1.0], repeat=d)))
    return VPolytope(signs @ V), H


def in_parallelotope(V, points, tol: float | None = None) -> np.ndarray:
    """Row-wise membership of ``points`` in P, via coordinates beta = A^-1 x."""
    tol = tolerance(tol)
    V = np.asarray(V, dtype=float)
    beta = np.linalg.solve(V.T, np.atleast_2d(points).T)
    return np.all(np.abs(beta) <= 1 + tol, axis=0)


def check_local_maximality_gives_P(Q: VPolytope, simplex: SimplexChoice | Sequence[int],
                                   tol: float | None = None) -> bool:
    """True iff every point of Q lies in the parallelotope spanned by the simplex."""
    tol = tolerance(tol)
    idx = simplex.indices if isinstance(simplex, SimplexChoice) else tuple(simplex)
    P = np.asarray(Q.points)
    return bool(np.all(in_parallelotope(P[list(idx)], P, tol)))


def boundary_point(Q: VPolytope, simplex: SimplexChoice | Sequence[int]):
    """(u, y, fallback): u the facet centroid, y where the ray through -u meets the boundary."""
    idx = simplex.indices if isinstance(simplex, SimplexChoice) else tuple(simplex)
    V = np.asarray(Q.points)[list(idx)]
    u = V.mean(axis=0)
    direction, fallback = -u, False
    # the v_i are independent so u != 0; guard anyway
    if np.linalg.norm(u) <= tolerance():
        direction, fallback = -V[0], True
    g = gauge(Q, direction).value
    if not (np.isfinite(g) and g > 0):
        raise OriginNotInterior("ray from the origin does not leave Q")
    return u, direction / g, fallback


def caratheodory_select(Q: VPolytope, y, hull: Optional[HullResult] = None):
    """(indices, weights, fallback) writing boundary point y with <= d vertices.

    The combination is restricted to the vertices of a facet containing y
    (lowest facet index when y lies on a ridge).  If that system is
    numerically infeasible, all vertices are used and ``fallback`` is set.
    """
    P = np.asarray(Q.points)
    h = convex_hull(P) if hull is None else hull
    y = np.asarray(y, dtype=float)
    scale = max(1.0, float(np.max(np.abs(P))))
    pools = [list(f.vertices) for f in h.facets
             if abs(float(f.normal @ y) - f.offset) <= FACET_HIT_TOL * scale]
    pools = pools[:1] + [list(h.extreme_indices)]
    for attempt, pool in enumerate(pools):
        E = np.vstack([P[pool].T, np.ones(len(pool))])
        res = basic_feasible_solution(E, np.append(y, 1.0))
        if not res.optimal:
            continue
        w = res.x / res.x.sum()
        if np.max(np.abs(w @ P[pool] - y)) > 1e-8 * scale:
            continue
        keep = np.nonzero(w > 0)[0]
        order = sorted(keep, key=lambda k: pool[k])
        idx = tuple(int(pool[k]) for k in order)
        return idx, tuple(float(w[k]) for k in order), attempt > 0 or len(pools) == 1
    raise DegenerateInput("boundary point is not a convex combination of vertices")


def sparse_approx(Q: VPolytope, lam: Optional[float] = None,
                  mode: SimplexMode | str = SimplexMode.EXHAUSTIVE,
                  eps: float | None = None) -> SelectionCertificate:
    """Pick <= 2d vertices of Q with Q ⊆ -(lambda+2) d conv(selected).

    ``lam`` is an externally known symmetry constant; the guarantee uses the
    larger of it and the measured one.
    """
    eps = tolerance(eps)
    P = np.asarray(Q.points)
    d = Q.dim
    h = convex_hull(P)
    if not origin_is_interior(Q, eps, h):
        raise OriginNotInterior("origin must be interior to conv(Q)")
    ext = list(h.extreme_indices)
    lam_star = max(gauge(Q, -P[i]).value for i in ext)
    lam_used = lam_star if lam is None else max(lam_star, float(lam))
    simplex = max_simplex(Q, mode, ext)
    u, y, dir_fallback = boundary_point(Q, simplex)
    c_idx, c_w, c_fallback = caratheodory_select(Q, y, h)
    qprime = tuple(sorted(set(simplex.indices) | set(c_idx)))
    return SelectionCertificate(
        dim=d, simplex=simplex, carath_indices=c_idx, carath_weights=c_w, u=u, y=y,
        lambda_measured=lam_star, lambda_used=lam_used, factor=(lam_used + 2) * d,
        qprime_indices=qprime, direction_fallback=dir_fallback, carath_fallback=c_fallback,
    )


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failed: Optional[str] = None
    detail: str = ""
    checks: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def verify_certificate(Q: VPolytope, cert: SelectionCertificate, eps: float | None = None) -> Verdict:
    """Re-check Q ⊆ -factor Q' from the certificate with membership tests only.

    Sub-checks, in order:
      structure  indices consistent, |Q'| <= 2d, weights reproduce y, y on the boundary
      a          every point of Q lies in the parallelotope P of the simplex
      b          every corner of P lies in S' = {gamma_i <= 1, sum gamma >= -d}
      c          -u / lambda lies in Q'
      d          -w / factor lies in Q' for every point w of Q
    """
    eps = tolerance(eps)
    P = np.asarray(Q.points)
    n, d = P.shape
    checks: dict = {}

    def fail(name, why):
        checks[name] = False
        return Verdict(False, name, why, checks)

    simplex = list(cert.simplex.indices)
    if len(simplex) != d or len(set(simplex)) != d or not all(0 <= i < n for i in simplex):
        return fail("a", f"simplex must be {d} distinct vertex indices, got {simplex}")
    if not all(0 <= i < n for i in cert.carath_indices):
        return fail("structure", "Caratheodory index out of range")
    expected = tuple(sorted(set(simplex) | set(cert.carath_indices)))
    if tuple(cert.qprime_indices) != expected:
        return fail("structure", "qprime_indices is not the union of simplex and Caratheodory indices")
    if len(expected) > 2 * d:
        return fail("structure", f"|Q'| = {len(expected)} exceeds 2d = {2 * d}")
    w = np.asarray(cert.carath_weights, dtype=float)
    scale = max(1.0, float(np.max(np.abs(P))))
    if (len(w) != len(cert.carath_indices) or np.any(w < -eps) or abs(w.sum() - 1) > 1e-8
            or np.max(np.abs(w @ P[list(cert.carath_indices)] - cert.y)) > 1e-8 * scale):
        return fail("structure", "Caratheodory weights do not reproduce y")
    gy = gauge(Q, cert.y).value
    if abs(gy - 1.0) > 1e-7:
        return fail("structure", f"y is not on the boundary of Q (gauge {gy})")
    checks["structure"] = True

    V = P[simplex]
    if abs(np.linalg.det(V)) <= eps:
        return fail("a", "simplex vertices are linearly dependent")
    if not np.all(in_parallelotope(V, P, eps)):
        return fail("a", "a vertex of Q lies outside P")
    checks["a"] = True

    corners, _ = parallelotope_P(V)
    gamma = np.linalg.solve(V.T, corners.points.T)
    if np.any(gamma > 1 + eps) or np.any(gamma.sum(axis=0) < -d - eps):
        return fail("b", "a corner of P lies outside S'")
    checks["b"] = True

    Qp = VPolytope(P[list(expected)])
    if not (cert.lambda_used > 0 and contains(Qp, -cert.u / cert.lambda_used, eps)):
        return fail("c", "u is not in -lambda Q'")
    checks["c"] = True

    if not cert.factor > 0:
        return fail("d", "factor must be positive")
    for k, wpt in enumerate(P):
        if not contains(Qp, -wpt / cert.factor, eps):
            return fail("d", f"-Q[{k}] / factor is outside Q'")
    checks["d"] = True
    return Verdict(True, None, "", checks)
