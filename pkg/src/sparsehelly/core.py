"""Geometric value types shared by every module.

All containers are frozen dataclasses holding read-only numpy arrays, so they
can be passed between workers freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

#: global absolute tolerance for geometric predicates; change with set_tolerance
EPS = 1e-9


def tolerance(eps: float | None = None) -> float:
    """``eps`` if given, else the current global tolerance."""
    return EPS if eps is None else float(eps)


def set_tolerance(eps: float) -> None:
    global EPS
    if not eps > 0:
        raise ValueError("tolerance must be positive")
    EPS = float(eps)


class GeometryError(ValueError):
    """Base class for invalid-input conditions."""


class DegenerateInput(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class Unbounded(GeometryError):
    pass


class EmptyInterior(GeometryError):
    pass


class BudgetExceeded(GeometryError):
    pass


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def as_vec(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise GeometryError(f"expected a vector of length {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise GeometryError("vector has non-finite entries")
    return v


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``a . x <= b``."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        a = as_vec(self.a)
        if not np.linalg.norm(a) > 0:
            raise GeometryError("halfspace normal must be non-zero")
        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "b", float(self.b))


@dataclass(frozen=True)
class HPolytope:
    """Intersection of halfspaces ``A x <= b``.

    ``tags`` optionally records, for every row, the index of the object it
    was derived from (a source point for polars, an input halfspace for
    normalized families).
    """

    A: np.ndarray
    b: np.ndarray
    tags: tuple[int, ...] | None = None

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape[0] == 0 or A.shape[1] == 0:
            raise GeometryError("H-polytope needs at least one halfspace and dim >= 1")
        if A.shape[0] != b.shape[0]:
            raise GeometryError("A and b row counts differ")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise GeometryError("non-finite halfspace data")
        if np.any(np.linalg.norm(A, axis=1) == 0):
            raise GeometryError("halfspace normal must be non-zero")
        if self.tags is not None and len(self.tags) != A.shape[0]:
            raise GeometryError("tags must have one entry per halfspace")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))
        if self.tags is not None:
            object.__setattr__(self, "tags", tuple(int(t) for t in self.tags))

    @classmethod
    def from_halfspaces(cls, halfspaces: Sequence[Halfspace]) -> "HPolytope":
        return cls(np.array([h.a for h in halfspaces]), np.array([h.b for h in halfspaces]))

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def halfspaces(self) -> list[Halfspace]:
        return [Halfspace(a, b) for a, b in zip(self.A, self.b)]

    def __len__(self):
        return self.A.shape[0]

    def contains(self, x, tol: float | None = None) -> bool:
        return bool(np.all(self.A @ as_vec(x, self.dim) <= self.b + tolerance(tol)))

    def subset(self, rows: Sequence[int]) -> "HPolytope":
        rows = list(rows)
        tags = None if self.tags is None else tuple(self.tags[i] for i in rows)
        return HPolytope(self.A[rows], self.b[rows], tags)

    def normalized(self) -> "HPolytope":
        """Rows rescaled to unit normals, so ``b`` is a signed distance."""
        norms = np.linalg.norm(self.A, axis=1)
        return HPolytope(self.A / norms[:, None], self.b / norms, self.tags)


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of a point list (points need not all be extreme)."""

    points: np.ndarray
    tags: tuple[int, ...] | None = None

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.points, dtype=float))
        if P.shape[0] == 0 or P.shape[1] == 0:
            raise GeometryError("V-polytope needs at least one point and dim >= 1")
        if not np.all(np.isfinite(P)):
            raise GeometryError("non-finite point coordinates")
        if self.tags is not None and len(self.tags) != P.shape[0]:
            raise GeometryError("tags must have one entry per point")
        object.__setattr__(self, "points", _frozen(P))
        if self.tags is not None:
            object.__setattr__(self, "tags", tuple(int(t) for t in self.tags))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def subset(self, idx: Sequence[int]) -> "VPolytope":
        idx = list(idx)
        tags = None if self.tags is None else tuple(self.tags[i] for i in idx)
        return VPolytope(self.points[idx], tags)

    def scaled(self, t: float) -> "VPolytope":
        return VPolytope(t * self.points, self.tags)


Polytope = Union[HPolytope, VPolytope]


@dataclass(frozen=True)
class AffineMap:
    """x -> linear @ x + shift, with invertible linear part."""

    linear: np.ndarray
    shift: np.ndarray = field(default=None)
    tol: float = 1e-12

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.linear, dtype=float))
        if M.shape[0] != M.shape[1]:
            raise GeometryError("linear part must be square")
        shift = np.zeros(M.shape[0]) if self.shift is None else as_vec(self.shift, M.shape[0])
        if not abs(np.linalg.det(M)) > self.tol:
            raise GeometryError("affine map has a singular linear part")
        object.__setattr__(self, "linear", _frozen(M))
        object.__setattr__(self, "shift", _frozen(shift))

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x @ self.linear.T + self.shift

    def inverse(self) -> "AffineMap":
        Minv = np.linalg.inv(self.linear)
        return AffineMap(Minv, -Minv @ self.shift, tol=0.0)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner."""
        return AffineMap(self.linear @ inner.linear, self.linear @ inner.shift + self.shift, tol=0.0)


@dataclass(frozen=True)
class Ellipsoid:
    """The set {center + shape @ z : |z| <= 1}."""

    center: np.ndarray
    shape: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        E = np.atleast_2d(np.asarray(self.shape, dtype=float))
        c = as_vec(self.center, E.shape[0])
        if E.shape[0] != E.shape[1]:
            raise GeometryError("shape matrix must be square")
        if np.max(np.abs(E - E.T)) > self.tol * max(1.0, np.max(np.abs(E))):
            raise GeometryError("shape matrix must be symmetric")
        E = 0.5 * (E + E.T)
        if not np.all(np.linalg.eigvalsh(E) > 0):
            raise GeometryError("shape matrix must be positive definite")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "shape", _frozen(E))

    @property
    def dim(self) -> int:
        return self.shape.shape[0]

    @property
    def quadratic_form(self) -> np.ndarray:
        """Q with the ellipsoid equal to {x : (x-c)^T Q^{-1} (x-c) <= 1}."""
        return self.shape @ self.shape.T

    def volume(self) -> float:
        return unit_ball_volume(self.dim) * abs(np.linalg.det(self.shape))

    @classmethod
    def unit_ball(cls, dim: int) -> "Ellipsoid":
        return cls(np.zeros(dim), np.eye(dim))


def unit_ball_volume(d: int) -> float:
    from math import gamma, pi

    return pi ** (d / 2) / gamma(d / 2 + 1)


def apply_affine(T: AffineMap, P: Polytope) -> Polytope:
    """Image of a polytope under T, in the same representation.

    For an H-polytope ``{a.x <= b}`` the image is ``{(M^-T a).y <= b + (M^-T a).shift}``.
    """
    if T.dim != P.dim:
        raise GeometryError("dimension mismatch between map and polytope")
    if isinstance(P, VPolytope):
        return VPolytope(T(P.points), P.tags)
    Ainv_t = np.linalg.solve(T.linear.T, P.A.T).T  # rows are M^-T a_i
    return HPolytope(Ainv_t, P.b + Ainv_t @ T.shift, P.tags)


def negate(P: VPolytope) -> VPolytope:
    return VPolytope(-P.points, P.tags)
