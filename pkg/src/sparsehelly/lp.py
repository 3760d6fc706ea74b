"""Dense two-phase primal simplex with Bland's rule.

Sized for the tiny problems this package produces (tens of rows and
columns): gauge evaluations, membership tests, Chebyshev centres and basic
feasible solutions for Caratheodory reductions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

PIVOT_TOL = 1e-10
OPT_TOL = 1e-10
FEAS_TOL = 1e-9


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class LpProblem:
    """minimize (or maximize) c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= lower.

    ``lower`` defaults to 0 for every variable; an entry of ``None`` makes that
    variable free.
    """

    c: np.ndarray
    A_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    lower: Optional[Sequence[Optional[float]]] = None
    maximize: bool = False

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        n = c.shape[0]
        object.__setattr__(self, "c", c)
        for mat, rhs in (("A_ub", "b_ub"), ("A_eq", "b_eq")):
            A, b = getattr(self, mat), getattr(self, rhs)
            if A is None:
                A, b = np.zeros((0, n)), np.zeros(0)
            A = np.asarray(A, dtype=float).reshape(-1, n)
            b = np.asarray(b, dtype=float).reshape(-1)
            if A.shape[0] != b.shape[0]:
                raise ValueError(f"{mat} and {rhs} have inconsistent sizes")
            if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
                raise ValueError("LP data must be finite")
            object.__setattr__(self, mat, A)
            object.__setattr__(self, rhs, b)
        if self.lower is not None and len(self.lower) != n:
            raise ValueError("lower must have one entry per variable")

    @property
    def n(self) -> int:
        return self.c.shape[0]


@dataclass
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray] = None
    value: float = float("nan")
    basis: tuple[int, ...] = field(default_factory=tuple)
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Standard form  min c.x, A x = b, x >= 0  with b >= 0."""

    def __init__(self, A, b, max_iter):
        m, n = A.shape
        sign = np.where(b < 0, -1.0, 1.0)
        A = A * sign[:, None]
        b = b * sign
        # columns: n structural, m artificial, rhs
        self.T = np.zeros((m + 1, n + m + 1))
        self.T[:m, :n] = A
        self.T[:m, n:n + m] = np.eye(m)
        self.T[:m, -1] = b
        self.n = n
        self.basis = list(range(n, n + m))
        self.active = np.ones(n + m, dtype=bool)  # columns allowed to enter
        self.iterations = 0
        self.max_iter = max_iter

    @property
    def m(self):
        return self.T.shape[0] - 1

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j
        self.iterations += 1

    def set_costs(self, cost):
        """Install the reduced-cost row for ``cost`` (length = #columns)."""
        T = self.T
        T[-1, :] = 0.0
        T[-1, :-1] = cost
        for r, j in enumerate(self.basis):
            if cost[j] != 0.0:
                T[-1] -= cost[j] * T[r]

    def run(self) -> LpStatus:
        T = self.T
        while True:
            if self.iterations >= self.max_iter:
                return LpStatus.ITERATION_LIMIT
            red = T[-1, :-1]
            cand = np.nonzero((red < -OPT_TOL) & self.active)[0]
            if cand.size == 0:
                return LpStatus.OPTIMAL
            j = int(cand[0])  # Bland: smallest eligible index
            colj = T[:-1, j]
            rows = np.nonzero(colj > PIVOT_TOL)[0]
            if rows.size == 0:
                return LpStatus.UNBOUNDED
            ratios = T[rows, -1] / colj[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = min(tied, key=lambda i: self.basis[i])
            self.pivot(int(r), j)

    def drop_artificials(self):
        """Pivot artificials out of the basis; delete rows that are redundant."""
        n = self.n
        r = 0
        while r < self.m:
            if self.basis[r] >= n:
                row = self.T[r, :n]
                cand = np.nonzero(np.abs(row) > PIVOT_TOL)[0]
                if cand.size:
                    self.pivot(r, int(cand[np.argmax(np.abs(row[cand]))]))
                else:
                    self.T = np.delete(self.T, r, axis=0)
                    del self.basis[r]
                    continue
            r += 1
        self.active[n:] = False

    def primal(self) -> np.ndarray:
        x = np.zeros(self.T.shape[1] - 1)
        for r, j in enumerate(self.basis):
            x[j] = self.T[r, -1]
        return x[: self.n]


def _standard_form(p: LpProblem):
    """Map to min c'.z, A z = b, z >= 0.  Returns (c', A, b, recover)."""
    n = p.n
    lower = [0.0] * n if p.lower is None else list(p.lower)
    cols = []  # (original var, sign)
    shift = np.zeros(n)
    for j, lo in enumerate(lower):
        cols.append((j, 1.0))
        if lo is None:
            cols.append((j, -1.0))
        else:
            shift[j] = float(lo)
    S = np.zeros((n, len(cols)))
    for k, (j, s) in enumerate(cols):
        S[j, k] = s
    m_ub, m_eq = p.A_ub.shape[0], p.A_eq.shape[0]
    nz = len(cols)
    A = np.zeros((m_ub + m_eq, nz + m_ub))
    A[:m_ub, :nz] = p.A_ub @ S
    A[:m_ub, nz:] = np.eye(m_ub)
    A[m_ub:, :nz] = p.A_eq @ S
    b = np.concatenate([p.b_ub - p.A_ub @ shift, p.b_eq - p.A_eq @ shift])
    c = np.zeros(nz + m_ub)
    c[:nz] = (-p.c if p.maximize else p.c) @ S

    def recover(z):
        return S @ z[:nz] + shift

    col_owner = [j for j, _ in cols]
    return c, A, b, recover, col_owner


def _phase_one(A, b, max_iter):
    m, n = A.shape
    tab = _Tableau(A, b, max_iter)
    cost = np.zeros(n + m)
    cost[n:] = 1.0
    tab.set_costs(cost)
    status = tab.run()
    if status is LpStatus.ITERATION_LIMIT:
        return tab, status
    infeas = -tab.T[-1, -1]
    if infeas > FEAS_TOL * max(1.0, float(np.max(np.abs(b), initial=0.0))):
        return tab, LpStatus.INFEASIBLE
    tab.drop_artificials()
    return tab, LpStatus.OPTIMAL


def solve(p: LpProblem) -> LpSolution:
    """Solve ``p`` by the two-phase simplex method with Bland's rule."""
    c, A, b, recover, owner = _standard_form(p)
    m, n = A.shape
    max_iter = 50 * (m + n) + 50
    tab, status = _phase_one(A, b, max_iter)
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status, iterations=tab.iterations)
    cost = np.zeros(tab.T.shape[1] - 1)
    cost[:n] = c
    tab.set_costs(cost)
    status = tab.run()
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status, iterations=tab.iterations)
    z = tab.primal()
    x = recover(z)
    basis = tuple(sorted({owner[j] for j in tab.basis if j < len(owner)}))
    return LpSolution(LpStatus.OPTIMAL, x, float(p.c @ x), basis, tab.iterations)


def basic_feasible_solution(E, f, eps: float = 1e-9) -> LpSolution:
    """A vertex of {x >= 0 : E x = f}.

    The support has at most rank(E) entries: phase one ends at a basis and
    redundant rows are discarded.  Entries below ``eps`` are snapped to zero
    and the residual is re-checked.
    """
    E = np.atleast_2d(np.asarray(E, dtype=float))
    f = np.asarray(f, dtype=float).reshape(-1)
    m, n = E.shape
    tab, status = _phase_one(E, f, 50 * (m + n) + 50)
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status, iterations=tab.iterations)
    x = tab.primal()
    x[x < eps] = 0.0
    resid = np.max(np.abs(E @ x - f), initial=0.0)
    scale = max(1.0, float(np.max(np.abs(f), initial=0.0)), float(np.max(np.abs(E), initial=0.0)))
    if resid > max(1e3 * eps, 1e-9) * scale:
        return LpSolution(LpStatus.INFEASIBLE, iterations=tab.iterations)
    basis = tuple(sorted(j for j in tab.basis if j < n and x[j] > 0))
    return LpSolution(LpStatus.OPTIMAL, x, 0.0, basis, tab.iterations)
