"""Deterministic test instances.

Random streams: instance ``index`` generated from base ``seed`` draws from
``PCG64(SeedSequence(seed, spawn_key=(index,)))``.  PCG64 and SeedSequence
are specified bit-for-bit by numpy, so corpora reproduce across platforms.
"""

from __future__ import annotations

import itertools

import numpy as np

KINDS = ("cube", "cross", "simplex-john", "tangent-halfspaces", "random-vpoly",
         "random-symmetric-vpoly")
H_KINDS = ("cube", "simplex-john", "tangent-halfspaces")
V_KINDS = ("cross", "random-vpoly", "random-symmetric-vpoly")


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def default_n(kind: str, d: int) -> int:
    return {"tangent-halfspaces": 6 * d, "random-vpoly": 4 * d + 4,
            "random-symmetric-vpoly": 4 * d + 4}.get(kind, 0)


def regular_simplex_normals(d: int) -> np.ndarray:
    """d+1 unit vectors summing to zero with pairwise inner product -1/d."""
    E = np.eye(d + 1) - 1.0 / (d + 1)
    # orthonormal basis of the hyperplane sum(x) = 0
    basis = np.linalg.svd(E)[2][:d]
    U = E @ basis.T
    return U / np.linalg.norm(U, axis=1)[:, None]


def unit_vectors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    U = rng.standard_normal((n, d))
    return U / np.linalg.norm(U, axis=1)[:, None]


def _surrounds_origin(U: np.ndarray) -> bool:
    from scipy.spatial import ConvexHull, QhullError

    try:
        return bool(np.all(ConvexHull(U).equations[:, -1] < -1e-9))
    except QhullError:
        return False


def generate(kind: str, d: int, n: int | None = None, seed: int = 0, index: int = 0) -> dict:
    """An instance as a JSON-ready dict with ``hrep`` and/or ``vrep``."""
    if kind not in KINDS:
        raise ValueError(f"unknown instance kind {kind!r}; choose from {', '.join(KINDS)}")
    if d < 1:
        raise ValueError("dimension must be positive")
    n = default_n(kind, d) if n is None else int(n)
    rng = rng_for(seed, index)
    out: dict = {"dim": d, "kind": kind, "seed": int(seed), "index": int(index)}
    eye = np.eye(d)
    if kind == "cube":
        A = np.vstack([eye, -eye])
        out["hrep"] = _hrep(A, np.ones(2 * d))
        out["vrep"] = np.array(list(itertools.product([1.0, -1.0], repeat=d))).tolist()
    elif kind == "cross":
        out["vrep"] = np.vstack([eye, -eye]).tolist()
        A = np.array(list(itertools.product([1.0, -1.0], repeat=d)))
        out["hrep"] = _hrep(A, np.ones(len(A)))
    elif kind == "simplex-john":
        U = regular_simplex_normals(d)
        out["hrep"] = _hrep(U, np.ones(d + 1))
        out["vrep"] = (-d * U).tolist()
    elif kind == "tangent-halfspaces":
        if n < d + 1:
            raise ValueError("need at least d+1 halfspaces for a bounded intersection")
        U = unit_vectors(rng, n, d)
        while not _surrounds_origin(U):
            U = unit_vectors(rng, n, d)
        out["hrep"] = _hrep(U, np.ones(n))
    elif kind == "random-vpoly":
        if n < d + 1:
            raise ValueError("need at least d+1 points")
        P = rng.standard_normal((n, d))
        w = rng.dirichlet(np.ones(n))
        out["vrep"] = (P - w @ P).tolist()
    else:  # random-symmetric-vpoly
        if n % 2 or n < 2 * d:
            raise ValueError("symmetric instances need an even point count >= 2d")
        P = rng.standard_normal((n // 2, d))
        out["vrep"] = np.vstack([P, -P]).tolist()
    return out


def _hrep(A: np.ndarray, b: np.ndarray) -> list[dict]:
    return [{"a": a.tolist(), "b": float(bi)} for a, bi in zip(A, b)]
