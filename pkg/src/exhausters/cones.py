"""Polyhedral cones, their duals, contingent cones, and cone intersections.

A cone is stored either by generating rays or by homogeneous halfspace
normals.  Polarity swaps the two representations exactly:

    N(cone(R))           = {x : <r, x> <= 0 for all r}   (halfspaces R)
    N({x : N x <= 0})    = cone(N)                        (generators N)

so no double-description step is ever needed; every predicate downstream
consumes whichever representation duality hands it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import tolerance
from .errors import DimensionMismatch, PointNotInSet, UnsupportedPair
from .numeric import (EQ, GE, LE, LinearConstraint, as_matrix, as_vector,
                      lp_feasible)
from . import bodies
from .bodies import Ball, Body, EmptyBody, HPolyhedron, VPolytope

GENERATORS = "generators"
HALFSPACES = "halfspaces"


@dataclass(frozen=True)
class Cone:
    """Closed convex polyhedral cone with apex 0.

    rep == "generators": cone of nonnegative combinations of `vectors` rows
    (no rows -> the trivial cone {0}).  rep == "halfspaces": intersection of
    {x : <row, x> <= 0} (no rows -> all of R^n).
    """

    rep: str
    vectors: np.ndarray
    _dim: Optional[int] = None

    def __post_init__(self):
        if self.rep not in (GENERATORS, HALFSPACES):
            raise ValueError(f"unknown cone representation {self.rep!r}")
        v = as_matrix(self.vectors, width=self._dim)
        if v.shape[1] == 0:
            raise ValueError("cannot infer dimension: pass dim for an empty vector list")
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "_dim", v.shape[1])

    @classmethod
    def from_rays(cls, rays, dim: Optional[int] = None) -> "Cone":
        return cls(GENERATORS, as_matrix(rays, width=dim), dim)

    @classmethod
    def from_halfspaces(cls, normals, dim: Optional[int] = None) -> "Cone":
        return cls(HALFSPACES, as_matrix(normals, width=dim), dim)

    @classmethod
    def full_space(cls, dim: int) -> "Cone":
        return cls(HALFSPACES, np.zeros((0, dim)), dim)

    @classmethod
    def zero(cls, dim: int) -> "Cone":
        return cls(GENERATORS, np.zeros((0, dim)), dim)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def is_full_space(self) -> bool:
        return self.rep == HALFSPACES and self.vectors.shape[0] == 0


def negative_dual(cone: Cone) -> Cone:
    """Polar (negative dual) cone  N(C) = {y : <y, x> <= 0 for all x in C}."""
    other = HALFSPACES if cone.rep == GENERATORS else GENERATORS
    return Cone(other, cone.vectors.copy(), cone.dim)


def positive_dual(cone: Cone) -> Cone:
    """Positive dual cone  K(C) = {w : <w, x> >= 0 for all x in C}  = N(-C)."""
    other = HALFSPACES if cone.rep == GENERATORS else GENERATORS
    return Cone(other, -cone.vectors, cone.dim)


def negate_cone(cone: Cone) -> Cone:
    """The reflected cone  -C."""
    return Cone(cone.rep, -cone.vectors, cone.dim)


def cone_contains(cone: Cone, point, tol: Optional[float] = None) -> bool:
    """Membership  point in cone  within tolerance."""
    tol = tolerance() if tol is None else tol
    x = as_vector(point, cone.dim)
    if cone.rep == HALFSPACES:
        if cone.vectors.shape[0] == 0:
            return True
        scale = np.maximum(1.0, np.abs(cone.vectors).sum(axis=1)) * max(1.0, float(np.abs(x).max()))
        return bool(np.all(cone.vectors @ x <= tol * scale))
    if cone.vectors.shape[0] == 0:
        return float(np.abs(x).max()) <= tol
    # x = R^T lambda with lambda >= 0
    R = cone.vectors
    cons = [LinearConstraint(R[:, i], x[i], EQ) for i in range(cone.dim)]
    k = R.shape[0]
    for j in range(k):
        e = np.zeros(k)
        e[j] = 1.0
        cons.append(LinearConstraint(e, 0.0, GE))
    return lp_feasible(cons) is not None


def cone_contains_many(cone: Cone, points: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Vectorized membership for a (k, n) array of points."""
    tol = tolerance() if tol is None else tol
    pts = as_matrix(points, cone.dim)
    if cone.rep == HALFSPACES:
        if cone.vectors.shape[0] == 0:
            return np.ones(pts.shape[0], dtype=bool)
        scale = np.maximum(1.0, np.abs(cone.vectors).sum(axis=1))
        return np.all(pts @ cone.vectors.T <= tol * scale, axis=1)
    return np.array([cone_contains(cone, p, tol) for p in pts])


def contingent_cone(poly: HPolyhedron, xbar) -> Cone:
    """Contingent (tangent) cone of a polyhedral set at a member point.

    For an H-polyhedron this is exactly the halfspace cone of the active
    constraints; an interior point therefore yields all of R^n.
    """
    x = as_vector(xbar, poly.dim)
    tol = tolerance()
    if poly.normals.shape[0] == 0:
        return Cone.full_space(poly.dim)
    scale = np.maximum(1.0, np.abs(poly.normals).sum(axis=1)) * max(1.0, float(np.abs(x).max()))
    slack = poly.normals @ x - poly.offsets
    if np.any(slack > tol * scale):
        raise PointNotInSet(f"point {x} violates the set by {float(slack.max()):.3g}")
    active = np.abs(slack) <= tol * scale
    return Cone(HALFSPACES, poly.normals[active], poly.dim)


# ---------------------------------------------------------------------------
# Projection onto a cone (active-set enumeration) and body/cone intersection
# ---------------------------------------------------------------------------

def _span_projection(rows: np.ndarray, point: np.ndarray) -> np.ndarray:
    """Orthogonal projection of `point` onto span(rows)."""
    if rows.shape[0] == 0:
        return np.zeros_like(point)
    G = rows @ rows.T
    coef = np.linalg.pinv(G) @ (rows @ point)
    return rows.T @ coef


def project_onto_cone(cone: Cone, point) -> tuple:
    """Exact Euclidean projection of a point onto a polyhedral cone.

    Enumerates candidate active sets (subsets of normals/rays up to the
    ambient dimension); the true projection is the orthogonal projection
    onto the span of its active rows, so it is always among the feasible
    candidates.  Returns (projection, distance).
    """
    p = as_vector(point, cone.dim)
    n = cone.dim
    rows = cone.vectors
    m = rows.shape[0]

    if cone.rep == HALFSPACES:
        if m == 0 or cone_contains(cone, p):
            return p.copy(), 0.0
        best, best_d = None, np.inf
        for size in range(1, min(m, n) + 1):
            for sel in itertools.combinations(range(m), size):
                sub = rows[list(sel)]
                cand = p - _span_projection(sub, p)  # onto the nullspace of sub
                if cone_contains(cone, cand):
                    d = float(np.linalg.norm(cand - p))
                    if d < best_d - 0.0:
                        best, best_d = cand, d
        if best is None:  # numerically safe fallback: the apex
            return np.zeros(n), float(np.linalg.norm(p))
        return best, best_d

    # generator representation
    if m == 0:
        return np.zeros(n), float(np.linalg.norm(p))
    if cone_contains(cone, p):
        return p.copy(), 0.0
    best, best_d = np.zeros(n), float(np.linalg.norm(p))  # apex is always feasible
    for size in range(1, min(m, n) + 1):
        for sel in itertools.combinations(range(m), size):
            sub = rows[list(sel)]
            cand = _span_projection(sub, p)
            if cone_contains(cone, cand):
                d = float(np.linalg.norm(cand - p))
                if d < best_d:
                    best, best_d = cand, d
    return best, best_d


def _polytope_cone_witness(body: Body, cone: Cone) -> Optional[np.ndarray]:
    """Feasibility witness for polytope/polyhedron bodies against any cone."""
    n = cone.dim
    if isinstance(body, HPolyhedron):
        if cone.rep == HALFSPACES:
            cons = body.constraints()
            cons += [LinearConstraint(a, 0.0, LE) for a in cone.vectors]
            return lp_feasible(cons, dim=n)
        # x = R^T lambda substituted into the body constraints
        R = cone.vectors
        k = R.shape[0]
        if k == 0:
            return np.zeros(n) if bodies.contains_point(body, np.zeros(n)) else None
        cons = [LinearConstraint(R @ a, b, LE) for a, b in zip(body.normals, body.offsets)]
        for j in range(k):
            e = np.zeros(k)
            e[j] = 1.0
            cons.append(LinearConstraint(e, 0.0, GE))
        lam = lp_feasible(cons, dim=k)
        return None if lam is None else R.T @ lam
    # V-polytope: barycentric variables mu (and ray weights lambda if needed)
    V = body.vertices
    k = V.shape[0]
    if cone.rep == HALFSPACES:
        cons = [LinearConstraint(V @ a, 0.0, LE) for a in cone.vectors]
        cons.append(LinearConstraint(np.ones(k), 1.0, EQ))
        for j in range(k):
            e = np.zeros(k)
            e[j] = 1.0
            cons.append(LinearConstraint(e, 0.0, GE))
        mu = lp_feasible(cons, dim=k)
        return None if mu is None else V.T @ mu
    R = cone.vectors
    r = R.shape[0]
    if r == 0:
        return np.zeros(n) if bodies.contains_point(body, np.zeros(n)) else None
    # variables (mu, lambda):  V^T mu = R^T lambda, sum mu = 1, mu, lambda >= 0
    cons = []
    for i in range(n):
        row = np.concatenate([V[:, i], -R[:, i]])
        cons.append(LinearConstraint(row, 0.0, EQ))
    cons.append(LinearConstraint(np.concatenate([np.ones(k), np.zeros(r)]), 1.0, EQ))
    for j in range(k + r):
        e = np.zeros(k + r)
        e[j] = 1.0
        cons.append(LinearConstraint(e, 0.0, GE))
    sol = lp_feasible(cons, dim=k + r)
    return None if sol is None else V.T @ sol[:k]


def _grow_nonzero(body: Body, cone: Cone, base: np.ndarray) -> Optional[np.ndarray]:
    """Best-effort nonzero point of body & cone reachable from a zero witness."""
    n = cone.dim
    candidates = []
    if cone.rep == GENERATORS:
        candidates.extend(cone.vectors)
    for i in range(n):
        for sign in (1.0, -1.0):
            e = np.zeros(n)
            e[i] = sign
            candidates.append(e)
    tol = tolerance()
    for u in candidates:
        norm = np.linalg.norm(u)
        if norm <= tol or not cone_contains(cone, u):
            continue
        u = u / norm
        # cone is convex and contains base and u, so base + s*u stays inside;
        # shrink s until the body accepts it.
        s = 1.0
        for _ in range(60):
            x = base + s * u
            if bodies.contains_point(body, x) and np.linalg.norm(x) > tol:
                return x
            s *= 0.5
    return None


def intersect_nonempty(body: Body, cone: Cone, exclude_zero: bool = False) -> Optional[np.ndarray]:
    """Witness of  body & cone != {}  (None when the intersection is empty).

    Singletons are direct membership tests, polyhedra/polytopes become LP
    feasibility problems, and positive-radius balls reduce to comparing the
    exact point-to-cone distance with the radius.  With ``exclude_zero`` a
    nonzero witness is sought (diagnostics only; best effort for balls).
    """
    if body.dim != cone.dim:
        raise DimensionMismatch(f"body dim {body.dim} != cone dim {cone.dim}")
    if isinstance(body, EmptyBody):
        return None
    tol = tolerance()

    p = bodies.as_singleton(body)
    if p is not None:
        if not cone_contains(cone, p):
            return None
        if exclude_zero and float(np.linalg.norm(p)) <= tol:
            return None
        return p

    if isinstance(body, Ball):
        proj, dist = project_onto_cone(cone, body.center)
        if dist > body.radius + tol:
            return None
        witness = proj
        if exclude_zero and float(np.linalg.norm(witness)) <= tol:
            return _grow_nonzero(body, cone, witness)
        return witness

    witness = _polytope_cone_witness(body, cone)
    if witness is None:
        return None
    if exclude_zero and float(np.linalg.norm(witness)) <= tol:
        return _grow_nonzero(body, cone, witness)
    return witness
