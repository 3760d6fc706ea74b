"""Maximum-volume inscribed ellipsoid and the affine map to John position.

The ellipsoid {c + E z : |z| <= 1} lies in {a.x <= b} iff |E a| + a.c <= b.
We maximize log det E over symmetric E with a barrier method: the centering
objective is

    t * (-log det E) - sum_i log((b_i - a_i.c)^2 - |E a_i|^2)

i.e. the standard second-order-cone barrier for each constraint.  Each
centering step is a damped Newton iteration that keeps E positive definite
and every cone constraint strictly feasible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import AffineMap, Ellipsoid, EmptyInterior, HPolytope, apply_affine, tolerance
from .hull import check_bounded, vertices_of_hpolytope
from .lp import LpProblem, solve
from .polarity import polar_of_hrep, symmetry_constant

MAX_NEWTON = 200
GAP_TOL = 1e-11
MU = 10.0


@dataclass(frozen=True)
class JohnResult:
    ellipsoid: Ellipsoid
    transform: AffineMap  # sends the ellipsoid to the unit ball
    quality: float  # min distance from origin to a transformed facet
    outer_radius: Optional[float] = None
    lambda_measured: Optional[float] = None
    newton_steps: int = 0


def chebyshev_center(H: HPolytope) -> tuple[np.ndarray, float]:
    """Centre and radius of the largest inscribed ball."""
    Hn = H.normalized()
    d = H.dim
    A = np.hstack([Hn.A, np.ones((len(Hn), 1))])
    c = np.zeros(d + 1)
    c[-1] = 1.0
    res = solve(LpProblem(c, A, Hn.b, lower=[None] * d + [0.0], maximize=True))
    if not res.optimal:
        raise EmptyInterior(f"Chebyshev LP failed: {res.status.value}")
    return res.x[:d], float(res.x[-1])


class _BarrierProblem:
    def __init__(self, A, b):
        self.A, self.b = A, b
        m, d = A.shape
        self.d = d
        pairs = [(j, k) for j in range(d) for k in range(j, d)]
        B = np.zeros((len(pairs), d, d))
        for p, (j, k) in enumerate(pairs):
            B[p, j, k] = B[p, k, j] = 1.0
        self.B = B
        self.L = np.einsum("pjk,ik->ijp", B, A)  # w_i = L_i @ e

    def unpack(self, theta):
        d = self.d
        return theta[:d], np.einsum("p,pjk->jk", theta[d:], self.B)

    def pack(self, c, E):
        iu = np.triu_indices(self.d)
        return np.concatenate([c, E[iu]])

    def feasible(self, theta):
        c, E = self.unpack(theta)
        try:
            np.linalg.cholesky(E)
        except np.linalg.LinAlgError:
            return False
        tau = self.b - self.A @ c
        w = self.A @ E  # E symmetric, so rows are E a_i
        return bool(np.all(tau > 0) and np.all(tau**2 - np.sum(w * w, axis=1) > 0))

    def value(self, theta, t):
        c, E = self.unpack(theta)
        tau = self.b - self.A @ c
        w = self.A @ E
        q = tau**2 - np.sum(w * w, axis=1)
        return -t * np.linalg.slogdet(E)[1] - np.sum(np.log(q))

    def derivatives(self, theta, t):
        d = self.d
        c, E = self.unpack(theta)
        A, L = self.A, self.L
        tau = self.b - A @ c
        w = A @ E
        q = tau**2 - np.sum(w * w, axis=1)
        gq = np.concatenate([-2 * tau[:, None] * A, -2 * np.einsum("ijp,ij->ip", L, w)], axis=1)
        grad = -np.sum(gq / q[:, None], axis=0)
        H = np.einsum("ia,ib->ab", gq / q[:, None], gq / q[:, None])
        H[:d, :d] -= np.einsum("i,ij,ik->jk", 2 / q, A, A)
        H[d:, d:] += np.einsum("i,ijp,ijr->pr", 2 / q, L, L)
        X = np.einsum("jk,pkl->pjl", np.linalg.inv(E), self.B)
        grad[d:] += -t * np.einsum("pjj->p", X)
        H[d:, d:] += t * np.einsum("pij,qji->pq", X, X)
        return grad, H


def _center(prob, theta, t):
    steps = 0
    f = prob.value(theta, t)
    while steps < MAX_NEWTON:
        g, H = prob.derivatives(theta, t)
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(H, g, rcond=None)[0]
        dec2 = float(-g @ step)
        if dec2 / 2 <= 1e-9:
            break
        s = 1.0
        while not prob.feasible(theta + s * step) or prob.value(theta + s * step, t) > f - 0.25 * s * dec2:
            s *= 0.5
            if s < 1e-14:
                return theta, steps
        theta = theta + s * step
        f_new = prob.value(theta, t)
        steps += 1
        if abs(f - f_new) <= 1e-13 * max(1.0, abs(f_new)):
            break
        f = f_new
    return theta, steps


def max_inscribed_ellipsoid(H: HPolytope, return_steps: bool = False):
    """Largest-volume ellipsoid inside a bounded, full-dimensional H-polytope."""
    check_bounded(H)
    c0, r = chebyshev_center(H)
    if r <= tolerance():
        raise EmptyInterior("polytope has empty interior")
    Hn = H.normalized()
    # work in coordinates where the Chebyshev ball is the unit ball
    A = Hn.A
    b = (Hn.b - A @ c0) / r
    prob = _BarrierProblem(A, b)
    theta = prob.pack(np.zeros(H.dim), 0.5 * np.eye(H.dim))
    nu = 2.0 * len(A)
    t, total = 1.0, 0
    while True:
        theta, steps = _center(prob, theta, t)
        total += steps
        if nu / t < GAP_TOL:
            break
        t *= MU
    c, E = prob.unpack(theta)
    ell = Ellipsoid(c0 + r * c, r * E)
    return (ell, total) if return_steps else ell


def to_john_position(H: HPolytope, outer: bool = True, measure_lambda: bool = True):
    """Map H so that its largest inscribed ellipsoid is the unit ball.

    Returns ``(JohnResult, K_tilde)`` with the rows of K_tilde normalized so
    that each offset is the distance of the facet from the origin.
    """
    ell, steps = max_inscribed_ellipsoid(H, return_steps=True)
    Einv = np.linalg.inv(ell.shape)
    T = AffineMap(Einv, -Einv @ ell.center, tol=0.0)
    Kt = apply_affine(T, H).normalized()
    radius = None
    if outer:
        V = vertices_of_hpolytope(Kt)
        radius = float(np.max(np.linalg.norm(V.points, axis=1)))
    lam = symmetry_constant(polar_of_hrep(Kt)) if measure_lambda else None
    res = JohnResult(ell, T, float(np.min(Kt.b)), radius, lam, steps)
    return res, Kt
