"""Select at most 2d halfspaces whose intersection is comparable to the whole.

Pipeline: John position -> polar point set -> sparse vertex selection ->
the selected polar vertices name the kept halfspaces.  Volumes and diameters
are measured in the caller's coordinates; the ratios are affine invariant.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import factorial, gamma, pi, sqrt
from typing import Optional

import numpy as np

from .core import EmptyInterior, HPolytope, Unbounded, VPolytope, tolerance, unit_ball_volume
from .hull import check_bounded, diameter, vertices_of_hpolytope, volume
from .john import chebyshev_center, to_john_position
from .lp import LpProblem, LpStatus, solve
from .polarity import polar_of_hrep, polar_of_vrep
from .sparse_select import SelectionCertificate, SimplexMode, parallelotope_P, sparse_approx

SLACK = 1e-3


def volume_chain_bound(d: int) -> float:
    """pi^(d/2) d^(5d/2) (d!)^(-1/2) / Gamma(d/2 + 1): explicit cap on vol K_sigma / vol K."""
    return pi ** (d / 2) * d ** (2.5 * d) / sqrt(factorial(d)) / gamma(d / 2 + 1)


def dvoretzky_rogers_floor(d: int) -> float:
    """Lower bound on the maximal origin simplex inside a body between B/d and B."""
    return 1.0 / (sqrt(factorial(d)) * d ** (d / 2))


@dataclass(frozen=True)
class NormalizedFamily:
    H: HPolytope  # tags hold the representative original index of each row
    groups: dict  # representative original index -> all merged original indices


def _redundant(H: HPolytope, i: int) -> bool:
    others = [k for k in range(len(H)) if k != i]
    res = solve(LpProblem(H.A[i], H.A[others], H.b[others], lower=[None] * H.dim, maximize=True))
    return res.status is LpStatus.OPTIMAL and res.value <= H.b[i] + tolerance()


def normalize_family(H: HPolytope, prune_redundant: bool = False, eps: float | None = None) -> NormalizedFamily:
    """Merge duplicate halfspaces (optionally drop redundant ones), keeping provenance."""
    eps = tolerance(eps)
    check_bounded(H)
    _, r = chebyshev_center(H)
    if r <= eps:
        raise EmptyInterior("the family's intersection has empty interior")
    Hn = H.normalized()
    scale = max(1.0, float(np.max(np.abs(Hn.b))))
    rows: list[int] = []
    groups: dict[int, list[int]] = {}
    for i in range(len(Hn)):
        for j in rows:
            if np.max(np.abs(Hn.A[i] - Hn.A[j])) <= eps and abs(Hn.b[i] - Hn.b[j]) <= eps * scale:
                groups[j].append(i)
                break
        else:
            rows.append(i)
            groups[i] = [i]
    out = HPolytope(Hn.A[rows], Hn.b[rows], tags=tuple(rows))
    if prune_redundant:
        keep = [k for k in range(len(out)) if not _redundant(out, k)]
        dropped = [out.tags[k] for k in range(len(out)) if k not in keep]
        out = out.subset(keep)
        for t in dropped:
            del groups[t]
    return NormalizedFamily(out, groups)


def metrics(K: HPolytope | VPolytope, Ksigma: HPolytope | VPolytope) -> tuple[float, float]:
    """(vol K_sigma / vol K, diam K_sigma / diam K)."""
    VK = K if isinstance(K, VPolytope) else vertices_of_hpolytope(K)
    VS = Ksigma if isinstance(Ksigma, VPolytope) else vertices_of_hpolytope(Ksigma)
    return volume(VS.points) / volume(VK.points), diameter(VS.points) / diameter(VK.points)


@dataclass(frozen=True)
class HellyReport:
    dim: int
    n: int
    sigma: tuple[int, ...]
    diam_K: float
    diam_Ksigma: float
    vol_K: float
    vol_Ksigma: float
    diam_bound: float
    vol_bound_explicit: float
    lambda_measured: float
    mode: str
    simplex_volume: float
    dr_floor: float
    santalo_product: float
    santalo_bound: float
    john_outer_radius: float
    flags: dict = field(default_factory=dict)
    certificate: Optional[SelectionCertificate] = None

    @property
    def diam_ratio(self) -> float:
        return self.diam_Ksigma / self.diam_K

    @property
    def vol_ratio(self) -> float:
        return self.vol_Ksigma / self.vol_K

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sigma"] = list(self.sigma)
        d["diam_ratio"] = self.diam_ratio
        d["vol_ratio"] = self.vol_ratio
        d["certificate"] = None if self.certificate is None else self.certificate.to_dict()
        return d


def _santalo(V: np.ndarray, d: int) -> float:
    """vol(P') * vol(P'°) for P' = -P / (2 d^2)."""
    corners, _ = parallelotope_P(V)
    Pp = corners.scaled(-1.0 / (2 * d * d))
    polar = vertices_of_hpolytope(polar_of_vrep(Pp), check=False)
    return volume(Pp.points) * volume(polar.points)


def helly_subset(H: HPolytope, mode: SimplexMode | str = SimplexMode.EXHAUSTIVE,
                 prune_redundant: bool = False) -> HellyReport:
    """Choose sigma with |sigma| <= 2d and measure K_sigma against K."""
    mode = SimplexMode(mode)
    d = H.dim
    fam = normalize_family(H, prune_redundant)
    john, Kt = to_john_position(fam.H, outer=True, measure_lambda=True)
    Q = polar_of_hrep(Kt)
    cert = sparse_approx(Q, lam=john.lambda_measured, mode=mode)
    sigma = tuple(sorted(fam.H.tags[i] for i in cert.qprime_indices))

    VK = vertices_of_hpolytope(H, check=False)
    flags: dict[str, bool] = {"size": len(sigma) <= 2 * d}
    Ks = H.subset(sigma)
    try:
        VS = vertices_of_hpolytope(Ks)
        flags["bounded"] = True
    except Unbounded:
        VS = None
        flags["bounded"] = False
    diam_K, vol_K = diameter(VK.points), volume(VK.points)
    if VS is not None:
        diam_S, vol_S = diameter(VS.points), volume(VS.points)
        flags["contains_K"] = bool(np.all(VK.points @ Ks.A.T <= Ks.b + 1e-7 * max(1.0, np.max(np.abs(Ks.b)))))
        # transformed coordinates: K~_sigma ⊆ -factor K~
        Wt = john.transform(VS.points)
        flags["inclusion"] = bool(np.all((-Wt / cert.factor) @ Kt.A.T <= Kt.b + 1e-7))
    else:
        diam_S = vol_S = float("inf")
    diam_bound = 2 * d * d * diam_K
    vol_bound = volume_chain_bound(d) * vol_K
    flags["diameter"] = diam_S <= diam_bound * (1 + SLACK)
    if mode is SimplexMode.EXHAUSTIVE:
        flags["volume"] = vol_S <= vol_bound * (1 + SLACK)

    V = np.asarray(Q.points)[list(cert.simplex.indices)]
    sant = _santalo(V, d)
    sant_bound = unit_ball_volume(d) ** 2
    flags["santalo"] = sant <= sant_bound * (1 + SLACK)

    return HellyReport(
        dim=d, n=len(H), sigma=sigma, diam_K=diam_K, diam_Ksigma=diam_S, vol_K=vol_K,
        vol_Ksigma=vol_S, diam_bound=diam_bound, vol_bound_explicit=vol_bound,
        lambda_measured=float(john.lambda_measured), mode=mode.value,
        simplex_volume=cert.simplex.volume, dr_floor=dvoretzky_rogers_floor(d),
        santalo_product=sant, santalo_bound=sant_bound,
        john_outer_radius=float(john.outer_radius), flags=flags, certificate=cert,
    )


def mc_volume(H: HPolytope, samples: int, rng: np.random.Generator,
              chunk: int = 250_000) -> tuple[float, float]:
    """Rejection-sampling volume estimate and its standard error."""
    V = vertices_of_hpolytope(H).points
    lo, hi = V.min(axis=0), V.max(axis=0)
    box = float(np.prod(hi - lo))
    hits, done = 0, 0
    while done < samples:
        m = min(chunk, samples - done)
        X = lo + (hi - lo) * rng.random((m, H.dim))
        hits += int(np.count_nonzero(np.all(X @ H.A.T <= H.b, axis=1)))
        done += m
    p = hits / samples
    return box * p, box * sqrt(p * (1 - p) / samples)
