"""Convex hulls, facets, volumes and diameters in low dimension."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import DegenerateInput, EmptyInterior, HPolytope, Unbounded, VPolytope, tolerance
from .lp import LpProblem, LpStatus, solve

FACET_TOL = 1e-8


@dataclass(frozen=True)
class Facet:
    vertices: tuple[int, ...]
    normal: np.ndarray  # unit outward normal
    offset: float


@dataclass(frozen=True)
class HullResult:
    extreme_indices: tuple[int, ...]
    facets: tuple[Facet, ...]
    simplices: np.ndarray  # boundary triangulation, rows of point indices
    interior_point: np.ndarray

    def to_hpolytope(self) -> HPolytope:
        return HPolytope(np.array([f.normal for f in self.facets]),
                         np.array([f.offset for f in self.facets]))


def _points(P) -> np.ndarray:
    if isinstance(P, VPolytope):
        return np.asarray(P.points)
    return np.atleast_2d(np.asarray(P, dtype=float))


def _hull_1d(pts: np.ndarray) -> HullResult:
    x = pts[:, 0]
    lo, hi = int(np.argmin(x)), int(np.argmax(x))
    if x[hi] - x[lo] <= FACET_TOL:
        raise DegenerateInput("points do not span a segment")
    facets = (Facet((lo,), np.array([-1.0]), -x[lo]), Facet((hi,), np.array([1.0]), x[hi]))
    return HullResult((lo, hi), facets, np.array([[lo], [hi]]), np.array([(x[lo] + x[hi]) / 2]))


def convex_hull(points, tol: float = FACET_TOL) -> HullResult:
    """Facets and extreme points of conv(points).

    Coplanar simplicial facets returned by qhull are merged, so a cube has
    six facets. A point counts as extreme when the normals of the facets
    through it have full rank.
    """
    pts = _points(points)
    n, d = pts.shape
    if d > 8:
        raise ValueError("convex_hull supports dim <= 8")
    if n < d + 1:
        raise DegenerateInput(f"need at least {d + 1} points in dimension {d}")
    if d == 1:
        return _hull_1d(pts)
    try:
        qh = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput("point set is not full-dimensional") from exc

    scale = max(1.0, float(np.max(np.abs(pts))))
    normals, offsets = [], []
    for eq in qh.equations:
        a, b = eq[:d], -eq[d]
        for g in range(len(normals)):
            if np.max(np.abs(normals[g] - a)) <= tol and abs(offsets[g] - b) <= tol * scale:
                break
        else:
            normals.append(a)
            offsets.append(b)
    normals = np.array(normals)
    offsets = np.array(offsets)

    # candidate extremes: qhull vertices with duplicates collapsed to the first index
    cand = []
    for i in sorted(int(v) for v in qh.vertices):
        if not any(np.max(np.abs(pts[i] - pts[j])) <= tol * scale for j in cand):
            cand.append(i)
    cand = np.array(cand)
    on = np.abs(pts[cand] @ normals.T - offsets) <= tol * scale  # (cand, facets)
    extreme = [int(i) for k, i in enumerate(cand)
               if np.linalg.matrix_rank(normals[on[k]], tol=1e-6) == d]
    ext = np.array(extreme)
    on_ext = np.abs(pts[ext] @ normals.T - offsets) <= tol * scale
    facets = tuple(
        Facet(tuple(int(i) for i in ext[on_ext[:, g]]), normals[g], float(offsets[g]))
        for g in range(len(normals))
    )
    return HullResult(tuple(extreme), facets, np.asarray(qh.simplices), pts[ext].mean(axis=0))


def volume(points) -> float:
    """Volume by a fan triangulation from an interior point."""
    pts = _points(points)
    h = convex_hull(pts)
    d = pts.shape[1]
    cells = pts[h.simplices] - h.interior_point  # (cells, d, d)
    return float(np.sum(np.abs(np.linalg.det(cells)))) / factorial(d)


def diameter(points) -> float:
    """Largest pairwise distance (computed over extreme points when possible)."""
    pts = _points(points)
    if pts.shape[0] == 1:
        return 0.0
    try:
        pts = pts[list(convex_hull(pts).extreme_indices)]
    except DegenerateInput:
        pass
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))


def check_bounded(H: HPolytope) -> None:
    """Raise Unbounded / EmptyInterior unless H is a non-empty bounded set.

    Maximizing each of the 2d signed coordinates is a complete test: a
    non-zero recession direction has positive inner product with one of them.
    """
    d = H.dim
    for j in range(d):
        for s in (1.0, -1.0):
            c = np.zeros(d)
            c[j] = s
            res = solve(LpProblem(c, H.A, H.b, lower=[None] * d, maximize=True))
            if res.status is LpStatus.INFEASIBLE:
                raise EmptyInterior("halfspaces have empty intersection")
            if res.status is LpStatus.UNBOUNDED:
                raise Unbounded(f"intersection is unbounded along {'+' if s > 0 else '-'}e_{j}")
            if res.status is not LpStatus.OPTIMAL:
                raise RuntimeError(f"LP failed with status {res.status}")


def vertices_of_hpolytope(H: HPolytope, tol: float | None = None, check: bool = True) -> VPolytope:
    """All vertices of a bounded H-polytope by solving every dim-subset of rows."""
    tol = tolerance(tol)
    if check:
        check_bounded(H)
    Hn = H.normalized()
    A, b = Hn.A, Hn.b
    m, d = A.shape
    combos = np.array(list(itertools.combinations(range(m), d)), dtype=int)
    M = A[combos]
    dets = np.linalg.det(M)
    good = np.abs(dets) > 1e-10
    combos, M = combos[good], M[good]
    if len(combos) == 0:
        raise DegenerateInput("no vertex: normals do not span")
    X = np.linalg.solve(M, b[combos][..., None])[..., 0]
    scale = max(1.0, float(np.max(np.abs(b))))
    feas = np.all(X @ A.T <= b + 10 * tol * scale, axis=1)
    X = X[feas]
    if len(X) == 0:
        raise EmptyInterior("no feasible vertex found")
    kept: list[np.ndarray] = []
    for x in X:
        if not any(np.max(np.abs(x - k)) <= 1e-7 * scale for k in kept):
            kept.append(x)
    return VPolytope(np.array(kept))
