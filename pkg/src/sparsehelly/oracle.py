"""Brute-force ground truth for small instances.

Everything here is deliberately simple: exhaustive subset scans, direct
gauge LPs, qhull-based boundedness tests.  It shares no selection logic with
the pipeline it is used to check.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import BudgetExceeded, HPolytope, OriginNotInterior, VPolytope, tolerance
from .hull import diameter, vertices_of_hpolytope, volume
from .polarity import gauge
from .sparse_select import SelectionCertificate, verify_certificate


class Objective(str, enum.Enum):
    DIAMETER = "diam"
    VOLUME = "vol"
    FACTOR = "factor"


@dataclass(frozen=True)
class OracleResult:
    best_sigma: tuple[int, ...]
    best_value: float
    evaluated: int
    objective: Objective


def min_containment_factor(Q: VPolytope, Qprime: VPolytope) -> float:
    """Smallest mu with Q ⊆ -mu Q'."""
    if not _origin_inside(np.asarray(Qprime.points)):
        raise OriginNotInterior("origin must be interior to conv(Q')")
    return max(gauge(Qprime, -w).value for w in np.asarray(Q.points))


def _origin_inside(P: np.ndarray, tol: float | None = None) -> bool:
    tol = tolerance(tol)
    d = P.shape[1]
    if len(P) <= d:
        return False
    if d == 1:
        return P.min() < -tol and P.max() > tol
    try:
        eq = ConvexHull(P).equations
    except QhullError:
        return False
    return bool(np.all(eq[:, -1] < -tol))


def _colex_subsets(n: int, k: int):
    subsets = [c for j in range(k + 1) for c in itertools.combinations(range(n), j)]
    subsets.sort(key=lambda s: sum(1 << i for i in s))
    return subsets


def best_subset_bruteforce(family: HPolytope | VPolytope, k: int,
                           objective: Objective | str = Objective.DIAMETER,
                           budget: int = 10**7) -> OracleResult:
    """Exhaustively minimize the objective over all subsets of size <= k.

    For halfspace families the objectives are diam/vol of K_sigma relative to
    K (unbounded K_sigma scores +inf).  For point sets (objective ``factor``)
    the score is the containment factor of Q in -conv(Q[sigma]).
    """
    objective = Objective(objective)
    n = len(family)
    total = sum(comb(n, j) for j in range(min(k, n) + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} subsets exceed the budget of {budget}")
    subsets = _colex_subsets(n, min(k, n))

    if objective is Objective.FACTOR:
        if not isinstance(family, VPolytope):
            raise TypeError("factor objective needs a point set")
        P = np.asarray(family.points)

        def score(s):
            if len(s) <= family.dim:
                return float("inf")
            sub = VPolytope(P[list(s)])
            return max(gauge(sub, -w).value for w in P)
    else:
        if not isinstance(family, HPolytope):
            raise TypeError("diam/vol objectives need a halfspace family")
        H = family.normalized()
        VK = vertices_of_hpolytope(H)
        ref = diameter(VK.points) if objective is Objective.DIAMETER else volume(VK.points)
        cached: list[np.ndarray] = []  # recession directions of earlier subsets

        def score(s):
            if len(s) <= H.dim:
                return float("inf")
            A = H.A[list(s)]
            if any(np.all(A @ r <= tolerance()) for r in cached):
                return float("inf")
            if not _origin_inside(A):
                r = _recession_direction(A)
                if r is not None:
                    cached.append(r)
                return float("inf")
            V = vertices_of_hpolytope(H.subset(s), check=False).points
            val = diameter(V) if objective is Objective.DIAMETER else volume(V)
            return val / ref

    best_val, best = float("inf"), ()
    for s in subsets:
        v = score(s)
        if v < best_val:  # strict: the earliest colex subset wins ties
            best_val, best = v, s
    return OracleResult(tuple(best), best_val, len(subsets), objective)


def _recession_direction(A: np.ndarray) -> Optional[np.ndarray]:
    """Some r != 0 with A r <= 0, found from the SVD null space or a separating normal."""
    _, sv, Vt = np.linalg.svd(A)
    if len(sv) < A.shape[1] or sv[-1] <= 1e-12:
        return Vt[-1]
    # normals do not surround the origin: some hull facet separates it
    try:
        eq = ConvexHull(A).equations
    except QhullError:
        return None
    # facet n.x + off <= 0 with off >= 0 gives A n <= 0
    j = int(np.argmax(eq[:, -1]))
    r = eq[j, :-1]
    return r if np.all(A @ r <= tolerance()) else None


@dataclass(frozen=True)
class MutationOutcome:
    mutation: str
    accepted: bool
    should_reject: Optional[bool]  # None: the mutation does not change the truth of the claim

    @property
    def correct(self) -> bool:
        return self.should_reject is None or self.accepted != self.should_reject


def mutate_and_check(cert: SelectionCertificate, Q: VPolytope) -> list[MutationOutcome]:
    """Corrupt a valid certificate in several ways and record the verifier's verdicts."""
    P = np.asarray(Q.points)
    out = [MutationOutcome("unchanged", bool(verify_certificate(Q, cert)), False)]

    simplex = cert.simplex
    dropped = type(simplex)(simplex.indices[1:], simplex.volume, simplex.mode)
    m = cert.replace(simplex=dropped,
                     qprime_indices=tuple(sorted(set(dropped.indices) | set(cert.carath_indices))))
    out.append(MutationOutcome("drop_simplex_vertex", bool(verify_certificate(Q, m)), True))

    mu = min_containment_factor(Q, VPolytope(P[list(cert.qprime_indices)]))
    half = cert.factor / 2
    applicable = True if mu > half * (1 + 1e-6) else (False if mu < half * (1 - 1e-6) else None)
    m = cert.replace(factor=half)
    out.append(MutationOutcome("half_factor", bool(verify_certificate(Q, m)), applicable))

    m = cert.replace(factor=2 * cert.factor)
    out.append(MutationOutcome("double_factor", bool(verify_certificate(Q, m)), False))

    m = cert.replace(y=1.05 * cert.y)
    out.append(MutationOutcome("perturb_y", bool(verify_certificate(Q, m)), True))
    return out
