"""Dense vector helpers and a small two-phase simplex solver.

Every geometric predicate in the package bottoms out in one of three
entry points defined here: :func:`lp_solve`, :func:`lp_feasible` and
:func:`strict_margin`.  The solver is a plain dense tableau simplex with
Bland's anti-cycling rule, written for desk-scale problems (a handful of
variables and constraints); free variables are split into positive and
negative parts and all senses are reduced to equalities with slacks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import tolerance
from .errors import DimensionMismatch

LE = "<="
GE = ">="
EQ = "=="

MIN = "min"
MAX = "max"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# Pivot threshold of the tableau arithmetic; deliberately below the global
# feasibility tolerance so that degenerate pivots are still taken.
_PIVOT_TOL = 1e-10
_MAX_PIVOTS = 10_000


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    """Coerce `x` to a finite 1-D float array, optionally checking its length."""
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got array of shape {v.shape}")
    if v.size < 1:
        raise ValueError("vectors must have dimension >= 1")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"vector has non-finite entries: {v}")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.size}")
    return v


def as_matrix(rows, dim: Optional[int] = None, *, width: Optional[int] = None) -> np.ndarray:
    """Coerce `rows` to a finite (k, n) float matrix (k may be 0 if width given)."""
    m = np.asarray(rows, dtype=float)
    if m.size == 0:
        if width is None and dim is None:
            raise ValueError("cannot infer dimension of an empty row list")
        return np.zeros((0, width if width is not None else dim))
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if dim is not None and m.shape[1] != dim:
        raise DimensionMismatch(f"expected row dimension {dim}, got {m.shape[1]}")
    return m


@dataclass(frozen=True)
class LinearConstraint:
    """Halfspace / hyperplane constraint  <normal, x>  sense  offset."""

    normal: np.ndarray
    offset: float
    sense: str = LE

    def __post_init__(self):
        object.__setattr__(self, "normal", as_vector(self.normal))
        object.__setattr__(self, "offset", float(self.offset))
        if self.sense not in (LE, GE, EQ):
            raise ValueError(f"unknown sense {self.sense!r}")
        if not np.isfinite(self.offset):
            raise ValueError("constraint offset must be finite")

    @property
    def dim(self) -> int:
        return self.normal.size

    def satisfied_by(self, x: np.ndarray, tol: Optional[float] = None) -> bool:
        tol = tolerance() if tol is None else tol
        slack = float(self.normal @ x) - self.offset
        scale = max(1.0, float(np.abs(self.normal).sum()))
        if self.sense == LE:
            return slack <= tol * scale
        if self.sense == GE:
            return slack >= -tol * scale
        return abs(slack) <= tol * scale


@dataclass(frozen=True)
class LPOutcome:
    """Result of :func:`lp_solve`; `point`/`value` are set iff status is optimal."""

    status: str
    point: Optional[np.ndarray] = None
    value: Optional[float] = None


def _pivot(T: np.ndarray, basis: list, row: int, col: int) -> None:
    piv = T[row] / T[row, col]
    column = T[:, col].copy()
    column[row] = 0.0
    T -= np.outer(column, piv)
    T[row] = piv
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: list, ncols: int) -> str:
    """Bland-rule simplex on tableau T (last row costs, last col rhs).

    Only columns < ncols may enter the basis (this bars artificial columns
    from re-entering during phase two).  Returns "optimal" or "unbounded".
    """
    m = len(basis)
    for _ in range(_MAX_PIVOTS):
        costs = T[-1, :ncols]
        entering = np.flatnonzero(costs < -_PIVOT_TOL)
        if entering.size == 0:
            return OPTIMAL
        col = int(entering[0])  # Bland: smallest eligible index
        colvals = T[:m, col]
        positive = np.flatnonzero(colvals > _PIVOT_TOL)
        if positive.size == 0:
            return UNBOUNDED
        ratios = T[positive, -1] / colvals[positive]
        best = ratios.min()
        near = positive[ratios <= best + _PIVOT_TOL * (1.0 + abs(best))]
        # Bland tie-break: leave the basic variable with the smallest index.
        row = int(min(near, key=lambda r: basis[r]))
        _pivot(T, basis, row, col)
    raise RuntimeError("simplex failed to terminate (pivot cap reached)")


def _solve_standard(M: np.ndarray, b: np.ndarray, cost: np.ndarray):
    """min cost@z  s.t.  M z = b, z >= 0, via two-phase simplex.

    Returns (status, z) with z the optimal coordinate vector when optimal.
    """
    m, nv = M.shape
    M = M.copy()
    b = b.copy()
    flip = b < 0
    M[flip] *= -1.0
    b[flip] *= -1.0

    # Phase one: artificial basis, minimize the sum of artificials.
    T = np.zeros((m + 1, nv + m + 1))
    T[:m, :nv] = M
    T[:m, nv:nv + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :nv] = -M.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(nv, nv + m))
    _run_simplex(T, basis, nv + m)
    if -T[-1, -1] > tolerance():
        return INFEASIBLE, None

    # Drive leftover artificials out of the basis where possible.
    for r in range(m):
        if basis[r] >= nv:
            cols = np.flatnonzero(np.abs(T[r, :nv]) > _PIVOT_TOL)
            if cols.size:
                _pivot(T, basis, r, int(cols[0]))

    # Rows still carrying an artificial are redundant (zero rows): drop them.
    keep = [r for r in range(m) if basis[r] < nv]
    T2 = np.zeros((len(keep) + 1, nv + 1))
    T2[:-1, :nv] = T[keep, :nv]
    T2[:-1, -1] = T[keep, -1]
    basis2 = [basis[r] for r in keep]

    # Phase two: install the true costs and reduce them over the basis.
    T2[-1, :nv] = cost
    for r, bcol in enumerate(basis2):
        if abs(T2[-1, bcol]) > 0.0:
            T2[-1] -= T2[-1, bcol] * T2[r]
    status = _run_simplex(T2, basis2, nv)
    if status != OPTIMAL:
        return status, None
    z = np.zeros(nv)
    for r, bcol in enumerate(basis2):
        z[bcol] = T2[r, -1]
    return OPTIMAL, z


def _standard_form(constraints: Sequence[LinearConstraint], n: int):
    """Split free variables (x = u - w) and append slacks; returns (M, b)."""
    m = len(constraints)
    senses = [c.sense for c in constraints]
    slack_rows = [i for i, s in enumerate(senses) if s != EQ]
    M = np.zeros((m, 2 * n + len(slack_rows)))
    b = np.zeros(m)
    for i, c in enumerate(constraints):
        M[i, :n] = c.normal
        M[i, n:2 * n] = -c.normal
        b[i] = c.offset
    for k, i in enumerate(slack_rows):
        M[i, 2 * n + k] = 1.0 if senses[i] == LE else -1.0
    return M, b


def lp_solve(objective, constraints: Sequence[LinearConstraint], sense: str = MIN) -> LPOutcome:
    """Solve  min/max  <objective, x>  subject to linear constraints on free x.

    Parameters
    ----------
    objective : array-like
        Cost vector; its length fixes the ambient dimension.
    constraints : sequence of LinearConstraint
        All constraints must share the objective's dimension.
    sense : "min" or "max"

    Returns
    -------
    LPOutcome
        status "optimal" (with point and value), "infeasible", or "unbounded".
    """
    if sense not in (MIN, MAX):
        raise ValueError(f"unknown sense {sense!r}")
    c = as_vector(objective)
    n = c.size
    for ct in constraints:
        if ct.dim != n:
            raise DimensionMismatch(
                f"constraint dimension {ct.dim} != objective dimension {n}")
    cost = c if sense == MIN else -c
    M, b = _standard_form(constraints, n)
    full_cost = np.zeros(M.shape[1])
    full_cost[:n] = cost
    full_cost[n:2 * n] = -cost
    status, z = _solve_standard(M, b, full_cost)
    if status != OPTIMAL:
        return LPOutcome(status)
    x = z[:n] - z[n:2 * n]
    value = float(c @ x)
    return LPOutcome(OPTIMAL, point=x, value=value)


def lp_feasible(constraints: Sequence[LinearConstraint], dim: Optional[int] = None) -> Optional[np.ndarray]:
    """Return a point satisfying every constraint, or None if none exists."""
    if not constraints:
        if dim is None:
            raise ValueError("dim is required when the constraint list is empty")
        return np.zeros(dim)
    n = constraints[0].dim if dim is None else dim
    out = lp_solve(np.zeros(n), constraints, MIN)
    return out.point if out.status == OPTIMAL else None


def strict_margin(forms: Iterable) -> float:
    """Best uniform margin of the open system  <x, d_j> > 0  for all j.

    Computes t* = max over the box ||x||_inf <= 1 of min_j <x, d_j>.  The
    open system is solvable iff t* exceeds the global tolerance; t* is
    always >= 0 because x = 0 is feasible.
    """
    D = as_matrix(list(forms))
    if D.shape[0] == 0:
        raise ValueError("strict_margin needs at least one form")
    t, _ = strict_margin_point(D)
    return t


def strict_margin_point(forms) -> tuple:
    """Like :func:`strict_margin` but also returns the maximizing x."""
    D = as_matrix(forms)
    k, n = D.shape
    if k == 0:
        raise ValueError("strict_margin needs at least one form")
    # Variables (x, t); maximize t subject to t <= <x, d_j> and the box.
    cons = [LinearConstraint(np.append(-D[j], 1.0), 0.0, LE) for j in range(k)]
    for i in range(n):
        e = np.zeros(n + 1)
        e[i] = 1.0
        cons.append(LinearConstraint(e, 1.0, LE))
        cons.append(LinearConstraint(-e, 1.0, LE))
    obj = np.zeros(n + 1)
    obj[-1] = 1.0
    out = lp_solve(obj, cons, MAX)
    if out.status != OPTIMAL:  # box-bounded, always feasible
        raise RuntimeError(f"margin LP ended with status {out.status}")
    return float(out.value), out.point[:n]
