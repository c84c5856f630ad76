"""Closed convex bodies: balls, V-polytopes, H-polyhedra, and the empty set.

Bodies are small frozen value objects over numpy arrays.  The operations
that matter downstream are the support function, point/set containment,
and the Minkowski (Pontryagin) difference  A -. B = {x : x + B subset A},
which drives every set-order check in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .config import tolerance
from .errors import ConversionUnavailable, DimensionMismatch, UnsupportedPair
from .numeric import (LE, MAX, OPTIMAL, UNBOUNDED, LinearConstraint,
                      as_matrix, as_vector, lp_feasible, lp_solve)


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball; radius 0 is the singleton {center}."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (np.isfinite(self.radius) and self.radius >= 0.0):
            raise ValueError(f"ball radius must be a finite nonnegative real, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of finitely many points, stored as rows of `vertices`."""

    vertices: np.ndarray

    def __post_init__(self):
        v = as_matrix(self.vertices)
        if v.shape[0] == 0:
            raise ValueError("a V-polytope needs at least one vertex")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True)
class HPolyhedron:
    """Intersection of halfspaces  <normals[i], x> <= offsets[i]; may be unbounded.

    An empty normal list (with explicit `dim`) represents all of R^n.
    """

    normals: np.ndarray
    offsets: np.ndarray
    _dim: Optional[int] = None

    def __post_init__(self):
        n = as_matrix(self.normals, width=self._dim)
        b = np.atleast_1d(np.asarray(self.offsets, dtype=float))
        if b.ndim != 1 or b.size != n.shape[0]:
            raise ValueError("offsets must align with normal rows")
        if not np.all(np.isfinite(b)):
            raise ValueError("halfspace offsets must be finite")
        if n.shape[1] == 0:
            raise ValueError("cannot infer dimension: pass dim for an empty halfspace list")
        object.__setattr__(self, "normals", n)
        object.__setattr__(self, "offsets", b)
        object.__setattr__(self, "_dim", n.shape[1])

    @classmethod
    def full_space(cls, dim: int) -> "HPolyhedron":
        return cls(np.zeros((0, dim)), np.zeros(0), dim)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def constraints(self) -> list:
        return [LinearConstraint(a, b, LE) for a, b in zip(self.normals, self.offsets)]


@dataclass(frozen=True)
class EmptyBody:
    """Explicit empty-set marker."""

    dim: int


Body = Union[Ball, VPolytope, HPolyhedron, EmptyBody]


def dim_of(body: Body) -> int:
    return body.dim


def _check_dims(a: Body, b: Body) -> int:
    if a.dim != b.dim:
        raise DimensionMismatch(f"bodies live in dimensions {a.dim} and {b.dim}")
    return a.dim


def singleton(point) -> Ball:
    """The one-point body {point}, represented as a radius-0 ball."""
    return Ball(as_vector(point), 0.0)


def as_singleton(body: Body, tol: Optional[float] = None) -> Optional[np.ndarray]:
    """The single point of `body` if it is (numerically) a singleton, else None."""
    tol = tolerance() if tol is None else tol
    if isinstance(body, Ball) and body.radius <= tol:
        return body.center.copy()
    if isinstance(body, VPolytope):
        spread = np.abs(body.vertices - body.vertices[0]).max()
        if spread <= tol:
            return body.vertices[0].copy()
    return None


def support(body: Body, direction) -> float:
    """Support function  sup_{v in body} <v, direction>  (may be +-inf)."""
    if isinstance(body, EmptyBody):
        return -np.inf
    a = as_vector(direction, body.dim)
    if isinstance(body, Ball):
        return float(body.center @ a + body.radius * np.linalg.norm(a))
    if isinstance(body, VPolytope):
        return float((body.vertices @ a).max())
    out = lp_solve(a, body.constraints(), MAX)
    if out.status == UNBOUNDED:
        return np.inf
    if out.status == OPTIMAL:
        return out.value
    return -np.inf  # infeasible halfspace system: empty set


def inf_support(body: Body, direction) -> float:
    """inf_{v in body} <v, direction>  ==  -support(body, -direction)."""
    return -support(body, -as_vector(direction))


def contains_point(body: Body, point, tol: Optional[float] = None) -> bool:
    """Membership of a point in a body, within the global tolerance."""
    tol = tolerance() if tol is None else tol
    if isinstance(body, EmptyBody):
        return False
    x = as_vector(point, body.dim)
    if isinstance(body, Ball):
        return float(np.linalg.norm(x - body.center)) <= body.radius + tol
    if isinstance(body, HPolyhedron):
        if body.normals.shape[0] == 0:
            return True
        scale = np.maximum(1.0, np.abs(body.normals).sum(axis=1))
        return bool(np.all(body.normals @ x - body.offsets <= tol * scale))
    # V-polytope: x in conv(vertices) iff the barycentric system is feasible.
    V = body.vertices
    k, n = V.shape
    cons = []
    for row in range(n):
        cons.append(LinearConstraint(V[:, row], x[row], "=="))
    cons.append(LinearConstraint(np.ones(k), 1.0, "=="))
    for j in range(k):
        e = np.zeros(k)
        e[j] = 1.0
        cons.append(LinearConstraint(e, 0.0, ">="))
    return lp_feasible(cons) is not None


def is_empty(body: Body) -> bool:
    """Emptiness test; an LP for H-polyhedra, immediate otherwise."""
    if isinstance(body, EmptyBody):
        return True
    if isinstance(body, (Ball, VPolytope)):
        return False
    return lp_feasible(body.constraints(), dim=body.dim) is None


def translate(body: Body, shift) -> Body:
    """The translate  body + shift."""
    if isinstance(body, EmptyBody):
        return body
    t = as_vector(shift, body.dim)
    if isinstance(body, Ball):
        return Ball(body.center + t, body.radius)
    if isinstance(body, VPolytope):
        return VPolytope(body.vertices + t)
    return HPolyhedron(body.normals, body.offsets + body.normals @ t, body.dim)


def negate(body: Body) -> Body:
    """The reflection  -body = {-x : x in body}."""
    if isinstance(body, EmptyBody):
        return body
    if isinstance(body, Ball):
        return Ball(-body.center, body.radius)
    if isinstance(body, VPolytope):
        return VPolytope(-body.vertices)
    return HPolyhedron(-body.normals, body.offsets, body.dim)


def minkowski_diff(a: Body, b: Body) -> Body:
    """Minkowski (Pontryagin) difference  a -. b = {x : x + b subset a}.

    Supported pairs: anything minus a singleton (pure translation),
    ball minus ball (closed form), and H-polyhedron/V-polytope minus any
    body with a finite support function (halfspace tightening; V-polytopes
    are converted to halfspaces first, which limits them to dimension <= 3).
    A positive-radius ball minus a non-singleton polytope falls outside the
    body vocabulary (the result is an intersection of balls) and raises
    UnsupportedPair.
    """
    n = _check_dims(a, b)
    if isinstance(a, EmptyBody):
        return EmptyBody(n)
    if isinstance(b, EmptyBody):
        return HPolyhedron.full_space(n)  # x + {} subset a holds vacuously
    p = as_singleton(b)
    if p is not None:
        return translate(a, -p)
    if isinstance(a, Ball) and isinstance(b, Ball):
        if b.radius > a.radius + tolerance():
            return EmptyBody(n)
        return Ball(a.center - b.center, max(a.radius - b.radius, 0.0))
    if isinstance(a, VPolytope):
        a = to_hrep(a)
    if isinstance(a, HPolyhedron):
        offsets = np.empty_like(a.offsets)
        for i, normal in enumerate(a.normals):
            s = support(b, normal)
            if not np.isfinite(s):  # unbounded b in this direction
                return EmptyBody(n)
            offsets[i] = a.offsets[i] - s
        out = HPolyhedron(a.normals, offsets, n)
        return out if not is_empty(out) else EmptyBody(n)
    raise UnsupportedPair(
        f"minkowski_diff({type(a).__name__}, {type(b).__name__}): "
        "ball minus a non-singleton polytope is not representable here")


def contains(a: Body, b: Body) -> bool:
    """Set containment  b subset a  within the global tolerance."""
    _check_dims(a, b)
    if isinstance(b, EmptyBody):
        return True
    if isinstance(a, EmptyBody):
        return is_empty(b)
    p = as_singleton(b)
    if p is not None:
        return contains_point(a, p)
    if isinstance(b, VPolytope):
        return all(contains_point(a, v) for v in b.vertices)
    tol = tolerance()
    if isinstance(a, Ball):
        if isinstance(b, Ball):
            gap = float(np.linalg.norm(b.center - a.center)) + b.radius
            return gap <= a.radius + tol
        verts, bounded = vertices_of(b)
        if not bounded:
            raise UnsupportedPair("unbounded H-polyhedron inside a ball is undecidable here")
        # max of the convex norm over a polytope sits at a vertex
        return all(float(np.linalg.norm(v - a.center)) <= a.radius + tol for v in verts)
    if isinstance(a, HPolyhedron):
        scale = np.maximum(1.0, np.abs(a.normals).sum(axis=1)) if a.normals.size else np.zeros(0)
        for normal, offset, sc in zip(a.normals, a.offsets, scale):
            if support(b, normal) > offset + tol * sc:
                return False
        return True
    return contains(to_hrep(a), b)


def bodies_equal(a: Body, b: Body) -> bool:
    """Tolerance-based set equality: mutual containment."""
    return contains(a, b) and contains(b, a)


# ---------------------------------------------------------------------------
# V -> H conversion and vertex enumeration (ambient dimension 1-3)
# ---------------------------------------------------------------------------

def _dedupe_rows(rows: np.ndarray, tol: float) -> np.ndarray:
    kept = []
    for r in rows:
        if not any(np.abs(r - k).max() <= tol for k in kept):
            kept.append(r)
    return np.array(kept) if kept else rows[:0]


def _facets_1d(Y: np.ndarray):
    y = Y[:, 0]
    return [(np.array([1.0]), float(y.max())), (np.array([-1.0]), float(-y.min()))]


def _facets_2d(Y: np.ndarray, tol: float):
    out = []
    for i, j in itertools.combinations(range(Y.shape[0]), 2):
        edge = Y[j] - Y[i]
        norm = np.linalg.norm(edge)
        if norm <= tol:
            continue
        normal = np.array([edge[1], -edge[0]]) / norm
        for sign in (1.0, -1.0):
            nrm = sign * normal
            s = Y @ nrm
            hi = float(s.max())
            if hi - float(nrm @ Y[i]) <= tol:  # all points on one side
                out.append((nrm, hi))
    return out


def _facets_3d(Y: np.ndarray, tol: float):
    out = []
    for i, j, k in itertools.combinations(range(Y.shape[0]), 3):
        normal = np.cross(Y[j] - Y[i], Y[k] - Y[i])
        norm = np.linalg.norm(normal)
        if norm <= tol:
            continue
        normal = normal / norm
        s = Y @ normal
        base = float(normal @ Y[i])
        if float(s.max()) - base <= tol:
            out.append((normal, float(s.max())))
        if base - float(s.min()) <= tol:
            out.append((-normal, float(-s.min())))
    return out


def to_hrep(poly: VPolytope) -> HPolyhedron:
    """Exact halfspace representation of conv(vertices), dimensions 1-3.

    Degenerate (lower-dimensional) hulls come out as paired opposing
    halfspaces pinning the affine hull, plus facet halfspaces of the hull
    inside that affine hull.
    """
    n = poly.dim
    if n > 3:
        raise ConversionUnavailable(f"V-to-H conversion implemented for dim <= 3, got {n}")
    scale = 1.0 + float(np.abs(poly.vertices).max())
    tol = tolerance() * scale
    pts = _dedupe_rows(poly.vertices, tol)
    center = pts.mean(axis=0)
    M = pts - center

    _, svals, Vt = np.linalg.svd(M, full_matrices=True)
    svals = np.concatenate([svals, np.zeros(n - svals.size)])
    rank = int(np.sum(svals > tol))
    span = Vt[:rank]

    halfspaces = []
    for w in Vt[rank:]:  # pin the affine hull along each orthogonal direction
        c = float(w @ center)
        halfspaces.append((w, c))
        halfspaces.append((-w, -c))

    if rank > 0:
        Y = M @ span.T
        if rank == 1:
            local = _facets_1d(Y)
        elif rank == 2:
            local = _facets_2d(Y, tol)
        else:
            local = _facets_3d(Y, tol)
        for nrm_local, off_local in local:
            normal = span.T @ nrm_local
            halfspaces.append((normal, off_local + float(normal @ center)))

    # normalize + dedupe
    uniq = {}
    for normal, off in halfspaces:
        nn = np.linalg.norm(normal)
        if nn <= tol:
            continue
        normal, off = normal / nn, off / nn
        key = tuple(np.round(normal, 7)) + (round(off, 7),)
        uniq.setdefault(key, (normal, off))
    normals = np.array([h[0] for h in uniq.values()])
    offsets = np.array([h[1] for h in uniq.values()])
    return HPolyhedron(normals, offsets, n)


def is_bounded(poly: HPolyhedron) -> bool:
    """True iff the recession cone {d : normals @ d <= 0} is trivial."""
    n = poly.dim
    rec = [LinearConstraint(a, 0.0, LE) for a in poly.normals]
    box = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        box.append(LinearConstraint(e, 1.0, LE))
        box.append(LinearConstraint(-e, 1.0, LE))
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        for obj in (e, -e):
            out = lp_solve(obj, rec + box, MAX)
            if out.status == OPTIMAL and out.value > tolerance():
                return False
    return True


def vertices_of(poly: HPolyhedron):
    """Vertices of an H-polyhedron in dimension <= 3.

    Returns (vertices, bounded).  For an unbounded polyhedron the vertex
    list covers the bounded part only (it may be empty).
    """
    n = poly.dim
    if n > 3:
        raise ConversionUnavailable(f"vertex enumeration implemented for dim <= 3, got {n}")
    m = poly.normals.shape[0]
    bounded = is_bounded(poly)
    scale = 1.0 + (float(np.abs(poly.normals).max()) if m else 0.0) + float(np.abs(poly.offsets).max() if m else 0.0)
    tol = tolerance() * scale
    verts = []
    for rows in itertools.combinations(range(m), n):
        A = poly.normals[list(rows)]
        if abs(np.linalg.det(A)) <= 1e-12 * max(1.0, float(np.abs(A).max()) ** n):
            continue
        x = np.linalg.solve(A, poly.offsets[list(rows)])
        slack = poly.normals @ x - poly.offsets
        if np.all(slack <= tol * np.maximum(1.0, np.abs(poly.normals).sum(axis=1))):
            verts.append(x)
    verts = _dedupe_rows(np.array(verts) if verts else np.zeros((0, n)), max(tol, 1e-9))
    return verts, bounded


def bounding_box(body: Body, tol_pad: float = 0.0):
    """Axis-aligned bounding box (lo, hi); entries are +-inf when unbounded."""
    n = body.dim
    if isinstance(body, EmptyBody):
        return np.zeros(n), np.zeros(n)
    if isinstance(body, Ball):
        lo = body.center - body.radius
        hi = body.center + body.radius
    elif isinstance(body, VPolytope):
        lo = body.vertices.min(axis=0)
        hi = body.vertices.max(axis=0)
    else:
        lo, hi = np.empty(n), np.empty(n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = 1.0
            hi[i] = support(body, e)
            lo[i] = -support(body, -e)
    return lo - tol_pad, hi + tol_pad
