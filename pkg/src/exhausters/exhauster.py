"""Exhauster evaluation, reduction, covering tests, and optimality checks.

A lower exhauster represents a positively homogeneous h as

    h(g) = max_C min_{v in C} <v, g>        (upper: min_C max_{v in C}),

the max/min running over a finite family of closed convex bodies, either
on all of R^n or on a domain cone T (the generalized case).  Reduction
removes members that provably never contribute: pairwise domination in
the m1/m2 set orders against K = N(T), or - in the unconstrained lower
case - a covering condition on the sharp sets of Minkowski differences.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from .config import tolerance
from .errors import (DimensionMismatch, DomainMismatch, DomainNotFullSpace,
                     DomainViolationWarning, KindMismatch, UnsupportedPair,
                     WrongKind)
from .numeric import as_vector, strict_margin_point
from . import bodies
from .bodies import (Ball, Body, EmptyBody, HPolyhedron, VPolytope,
                     as_singleton, bodies_equal, contains, contains_point,
                     inf_support, minkowski_diff, negate, support, vertices_of)
from .cones import (GENERATORS, HALFSPACES, Cone, cone_contains,
                    cone_contains_many, intersect_nonempty, positive_dual)
from .order import (m1_minimal_family, m2_maximal_family, precedes_m1,
                    precedes_m2)

LOWER = "lower"
UPPER = "upper"

COVERED = "covered"
NOT_COVERED = "not_covered"
UNKNOWN = "unknown"

RULE_M1 = "pairwise-m1"
RULE_M2 = "pairwise-m2"
RULE_COVER = "sharp-cover"
RULE_SUBSET = "subset-fastpath"


@dataclass(frozen=True)
class Exhauster:
    """Finite exhauster: kind, member bodies, and a domain cone T.

    A full-space domain encodes the plain (non-generalized) representation.
    """

    kind: str
    members: Tuple[Body, ...]
    domain: Cone = None

    def __post_init__(self):
        if self.kind not in (LOWER, UPPER):
            raise ValueError(f"kind must be 'lower' or 'upper', got {self.kind!r}")
        members = tuple(self.members)
        if not members:
            raise ValueError("an exhauster needs at least one member")
        n = members[0].dim
        for m in members:
            if m.dim != n:
                raise DimensionMismatch("exhauster members have mixed dimensions")
            if isinstance(m, EmptyBody):
                raise ValueError("exhauster members must be nonempty")
        domain = self.domain if self.domain is not None else Cone.full_space(n)
        if domain.dim != n:
            raise DimensionMismatch("domain cone dimension does not match the members")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "domain", domain)

    @property
    def dim(self) -> int:
        return self.members[0].dim


def evaluate(exh: Exhauster, direction, check_domain: bool = True) -> float:
    """Value of the represented function at `direction` (may be +-inf).

    Directions outside the domain cone trigger a DomainViolationWarning;
    the max/min is still computed since it is a perfectly good number,
    it just carries no representation guarantee off the domain.
    """
    g = as_vector(direction, exh.dim)
    if check_domain and not exh.domain.is_full_space and not cone_contains(exh.domain, g):
        warnings.warn(
            f"direction {g} lies outside the domain cone", DomainViolationWarning,
            stacklevel=2)
    if exh.kind == LOWER:
        return max(inf_support(c, g) for c in exh.members)
    return min(support(c, g) for c in exh.members)


def _support_many(body: Body, dirs: np.ndarray) -> np.ndarray:
    """Support values of one body over the rows of `dirs` (vectorized)."""
    if isinstance(body, Ball):
        return dirs @ body.center + body.radius * np.linalg.norm(dirs, axis=1)
    if isinstance(body, VPolytope):
        return (dirs @ body.vertices.T).max(axis=1)
    return np.array([support(body, g) for g in dirs])


def evaluate_many(exh: Exhauster, dirs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`evaluate` over the rows of `dirs` (no domain check)."""
    dirs = np.asarray(dirs, dtype=float)
    if exh.kind == LOWER:
        vals = [-_support_many(c, -dirs) for c in exh.members]
        return np.max(vals, axis=0)
    vals = [_support_many(c, dirs) for c in exh.members]
    return np.min(vals, axis=0)


# ---------------------------------------------------------------------------
# Pairwise reduction (set orders) and strong extremality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Removal:
    """One removed member with its machine-checkable justification."""

    index: int
    rule: str
    witness: Optional[np.ndarray] = None
    by: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "rule": self.rule,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
            "by": list(self.by),
        }


@dataclass
class ReductionReport:
    removed: List[Removal] = field(default_factory=list)
    survivors: Set[int] = field(default_factory=set)
    minimal_by_inclusion_hint: bool = False

    def to_dict(self) -> dict:
        return {
            "removed": [r.to_dict() for r in self.removed],
            "survivors": sorted(self.survivors),
            "minimal_by_inclusion_hint": self.minimal_by_inclusion_hint,
        }


def _dominator(members, i: int, cone: Cone, kind: str, preferred: Set[int]):
    """A (j, witness) pair certifying the removal of member i."""
    others = sorted(preferred - {i}) + [j for j in range(len(members))
                                        if j != i and j not in preferred]
    for j in others:
        if kind == LOWER:
            chk = precedes_m1(members[j], members[i], cone)
        else:
            chk = precedes_m2(members[i], members[j], cone)
        if chk.holds and not bodies_equal(members[i], members[j]):
            return j, chk.witness
    raise RuntimeError(f"no dominator found for removed member {i}")  # unreachable


def reduce_pairwise(exh: Exhauster, cone: Cone) -> Tuple[Exhauster, ReductionReport]:
    """Drop members dominated in the m1 (lower) / m2 (upper) order against `cone`.

    Lower exhausters keep their m1-minimal members, upper exhausters their
    m2-maximal members; either family is again an exhauster of the same
    function on the domain.  Every removal is justified by the dominating
    member and an intersection witness.
    """
    members = exh.members
    try:
        if exh.kind == LOWER:
            survivors = m1_minimal_family(members, cone)
        else:
            survivors = m2_maximal_family(members, cone)
    except UnsupportedPair as exc:
        raise UnsupportedPair(f"pairwise reduction undecidable: {exc}") from exc

    report = ReductionReport(survivors=survivors)
    rule = RULE_M1 if exh.kind == LOWER else RULE_M2
    for i in range(len(members)):
        if i in survivors:
            continue
        j, witness = _dominator(members, i, cone, exh.kind, survivors)
        report.removed.append(Removal(i, rule, witness, (j,)))

    if len(survivors) == 1:
        lone = next(iter(survivors))
        report.minimal_by_inclusion_hint = strongly_extremal(exh, cone) == lone

    reduced = Exhauster(exh.kind, tuple(members[i] for i in sorted(survivors)), exh.domain)
    return reduced, report


def strongly_extremal(exh: Exhauster, cone: Cone) -> Optional[int]:
    """Index of a member below (lower) / above (upper) every other member.

    When such a member exists, the singleton family formed by it is an
    exhauster of the same function; for lower exhausters it is minimal by
    inclusion.  Returns None when no member is comparable to all others.
    """
    members = exh.members
    for i, candidate in enumerate(members):
        if exh.kind == LOWER:
            ok = all(precedes_m1(candidate, other, cone).holds
                     for j, other in enumerate(members) if j != i)
        else:
            ok = all(precedes_m2(other, candidate, cone).holds
                     for j, other in enumerate(members) if j != i)
        if ok:
            return i
    return None


# ---------------------------------------------------------------------------
# Sharp-set covering reduction (unconstrained lower exhausters)
# ---------------------------------------------------------------------------

def _unit_circle(count: int) -> np.ndarray:
    ang = 2.0 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(ang), np.sin(ang)])


def _icosphere(level: int = 2) -> np.ndarray:
    """Vertices of a refined icosahedron on the unit sphere."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    raw = []
    for s1 in (-1.0, 1.0):
        for s2 in (-1.0, 1.0):
            raw.append((s1, s2 * phi, 0.0))
            raw.append((0.0, s1, s2 * phi))
            raw.append((s2 * phi, 0.0, s1))
    verts = np.unique(np.array(raw), axis=0)
    verts = verts / np.linalg.norm(verts, axis=1, keepdims=True)
    # faces = vertex triples at minimal pairwise distance
    d = np.linalg.norm(verts[:, None, :] - verts[None, :, :], axis=2)
    edge = d[d > 1e-9].min()
    faces = [f for f in itertools.combinations(range(len(verts)), 3)
             if all(abs(d[p, q] - edge) < 1e-6 for p, q in itertools.combinations(f, 2))]
    tris = [tuple(verts[list(f)]) for f in faces]
    for _ in range(level):
        nxt = []
        for p, q, r in tris:
            pq = (p + q) / np.linalg.norm(p + q)
            qr = (q + r) / np.linalg.norm(q + r)
            rp = (r + p) / np.linalg.norm(r + p)
            nxt += [(p, pq, rp), (pq, q, qr), (rp, qr, r), (pq, qr, rp)]
        tris = nxt
    pts = np.unique(np.round(np.array([v for t in tris for v in t]), 12), axis=0)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _inscribed_sphere_points(dim: int) -> np.ndarray:
    if dim == 2:
        return _unit_circle(64)
    if dim == 3:
        return _icosphere(2)
    return np.vstack([np.eye(dim), -np.eye(dim)])  # cross-polytope, coarse but sound


def _direction_samples(diff: Body) -> Tuple[np.ndarray, bool]:
    """Points of (an inner approximation of) a Minkowski difference.

    Returns (points, exact): `exact` is False when the points only inner-
    approximate the set (positive-radius balls, unbounded polyhedra), in
    which case a failed covering test is inconclusive rather than negative.
    """
    p = as_singleton(diff)
    if p is not None:
        return p.reshape(1, -1), True
    if isinstance(diff, Ball):
        shell = _inscribed_sphere_points(diff.dim)
        return diff.center + diff.radius * shell, False
    if isinstance(diff, VPolytope):
        return diff.vertices, True
    verts, bounded = vertices_of(diff)
    return verts, bounded


@dataclass(frozen=True)
class CoverOutcome:
    """Verdict of the sharp-set covering test."""

    status: str
    witness: Optional[np.ndarray] = None
    fastpath_member: Optional[int] = None
    margin: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
            "fastpath_member": self.fastpath_member,
            "margin": self.margin,
        }


def sharp_cover_removable(exh: Exhauster, a_idx: int, candidates: Sequence[int]) -> CoverOutcome:
    """Can member `a_idx` be removed because sharp sets of the differences cover R^n?

    The union of the sharp sets (A -. B_i)^# covers R^n exactly when the
    open system  <x, d> > 0 for every d in every difference  has no
    solution.  For polytopal/singleton differences the test is an exact
    LP over their vertices; positive-radius ball differences are replaced
    by an inscribed polytope, which keeps a "covered" verdict sound and
    degrades a failed test to "unknown".  A candidate with B_i subset A
    settles the question immediately (covered).
    """
    if exh.kind != LOWER:
        raise WrongKind("the covering reduction applies to lower exhausters")
    if not exh.domain.is_full_space:
        raise DomainNotFullSpace("the covering reduction is stated for domain R^n")
    members = exh.members
    if a_idx < 0 or a_idx >= len(members):
        raise IndexError(f"member index {a_idx} out of range")
    candidates = list(candidates)
    if not candidates:
        raise ValueError("need at least one candidate member")
    if any(c == a_idx or c < 0 or c >= len(members) for c in candidates):
        raise ValueError("candidates must be valid indices distinct from a_idx")

    target = members[a_idx]
    for i in candidates:
        if contains(target, members[i]):
            return CoverOutcome(COVERED, fastpath_member=i)

    forms: List[np.ndarray] = []
    exact = True
    for i in candidates:
        diff = minkowski_diff(target, members[i])
        if isinstance(diff, EmptyBody):
            continue  # empty difference contributes no sharp halfspace
        pts, ex = _direction_samples(diff)
        exact = exact and ex
        if pts.shape[0]:
            forms.append(pts)
    if not forms:
        e1 = np.zeros(exh.dim)
        e1[0] = 1.0
        if exact:
            return CoverOutcome(NOT_COVERED, witness=e1)
        return CoverOutcome(UNKNOWN)

    margin, x = strict_margin_point(np.vstack(forms))
    if margin <= tolerance():
        return CoverOutcome(COVERED, margin=margin)
    if exact:
        return CoverOutcome(NOT_COVERED, witness=x, margin=margin)
    return CoverOutcome(UNKNOWN, margin=margin)


def reduce_by_cover(exh: Exhauster) -> Tuple[Exhauster, ReductionReport]:
    """Greedy family-level covering reduction (unconstrained lower case).

    Members are tested in index order against the currently surviving
    candidates; a removal shrinks the candidate pool, so no second pass can
    ever find new removals.  Each removal records either the containing
    member (fast path) or the full candidate list behind the covering LP.
    """
    if exh.kind != LOWER:
        raise WrongKind("the covering reduction applies to lower exhausters")
    if not exh.domain.is_full_space:
        raise DomainNotFullSpace("the covering reduction is stated for domain R^n")
    live = list(range(len(exh.members)))
    removals: List[Removal] = []
    for idx in list(live):
        if len(live) <= 1:
            break
        rest = [j for j in live if j != idx]
        sub = Exhauster(exh.kind,
                        tuple(exh.members[j] for j in [idx] + rest), exh.domain)
        out = sharp_cover_removable(sub, 0, list(range(1, len(rest) + 1)))
        if out.status != COVERED:
            continue
        if out.fastpath_member is not None:
            removals.append(Removal(idx, RULE_SUBSET, None,
                                    (rest[out.fastpath_member - 1],)))
        else:
            removals.append(Removal(idx, RULE_COVER, None, tuple(rest)))
        live.remove(idx)
    report = ReductionReport(removals, set(live), False)
    reduced = Exhauster(exh.kind, tuple(exh.members[i] for i in live), exh.domain)
    return reduced, report


def _sharp_full_space(diff: Body) -> bool:
    """Is the sharp set of a difference all of R^n?  (Empty diff: no.)"""
    tol = tolerance()
    if isinstance(diff, EmptyBody):
        return False
    p = as_singleton(diff)
    if p is not None:
        return float(np.linalg.norm(p)) <= tol
    if isinstance(diff, Ball):
        # exact Euclidean margin: some x has <x, d> > 0 on the whole ball
        # iff the center is farther from 0 than the radius
        return float(np.linalg.norm(diff.center)) <= diff.radius + tol
    pts, ex = _direction_samples(diff)
    if not ex:
        raise UnsupportedPair("sharp-set test needs a compact difference")
    if pts.shape[0] == 0:
        return False
    margin, _ = strict_margin_point(pts)
    return margin <= tol


def lemma41_check(a: Body, b: Body) -> Tuple[bool, bool, bool]:
    """The equivalent triple for compact convex a, b:

    (sharp set of a -. b is all of R^n,  0 in a -. b,  b subset a).

    The three booleans are computed along independent routes (margin LP /
    closed form, point membership, containment) and must agree; any
    disagreement on supported inputs is an implementation bug.
    """
    subset = contains(a, b)
    diff = minkowski_diff(a, b)
    zero_in = (not isinstance(diff, EmptyBody)) and contains_point(diff, np.zeros(a.dim))
    sharp_full = _sharp_full_space(diff)
    return sharp_full, zero_in, subset


# ---------------------------------------------------------------------------
# Optimality conditions (lower exhausters on a decomposed cone)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairCondition:
    member: int
    cone: int
    cond_ii: bool
    cond_iii: bool
    witness: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "cone": self.cone,
            "cond_ii": self.cond_ii,
            "cond_iii": self.cond_iii,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
        }


@dataclass
class OptimalityReport:
    per_pair: List[PairCondition]
    cond_iv: bool
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "per_pair": [p.to_dict() for p in self.per_pair],
            "cond_iv": self.cond_iv,
            "consistent": self.consistent,
        }


def optimality_check(exh: Exhauster, decomposition: Sequence[Cone]) -> OptimalityReport:
    """Zero-maximality conditions of h over the union of the decomposition cones.

    For every member C and cone A the condition is  (-C) & K(A) nonempty
    (equivalently 0 in C + K(A), with K the positive dual); the overall
    verdict cond_iv is their conjunction and it is equivalent to h <= 0 on
    the union.  The witness is a point of (-C) & K(A).

    Note: both intersection conditions are implemented as *nonempty*; the
    variant with "= empty" would contradict the rest of the equivalence
    chain and is not what the verdict needs.
    """
    if exh.kind != LOWER:
        raise WrongKind("optimality conditions are stated for lower exhausters")
    if not decomposition:
        raise ValueError("need at least one decomposition cone")
    pairs: List[PairCondition] = []
    for ci, member in enumerate(exh.members):
        reflected = negate(member)
        for ai, cone in enumerate(decomposition):
            if cone.dim != exh.dim:
                raise DimensionMismatch("decomposition cone dimension mismatch")
            witness = intersect_nonempty(reflected, positive_dual(cone))
            ok = witness is not None
            pairs.append(PairCondition(ci, ai, ok, ok, witness))
    cond_iv = all(p.cond_iii for p in pairs)
    consistent = all(p.cond_ii == p.cond_iii for p in pairs)
    return OptimalityReport(pairs, cond_iv, consistent)


# ---------------------------------------------------------------------------
# Sampling-based equivalence verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    max_abs_gap: float
    worst_direction: Optional[np.ndarray]
    samples_used: int

    def to_dict(self) -> dict:
        return {
            "max_abs_gap": self.max_abs_gap,
            "worst_direction": None if self.worst_direction is None
            else [float(v) for v in self.worst_direction],
            "samples_used": self.samples_used,
        }


def _normalize_rows(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1)
    keep = norms > 1e-12
    return m[keep] / norms[keep, None]


def _same_domain(c1: Cone, c2: Cone, seed: int = 0) -> bool:
    if c1.dim != c2.dim:
        return False
    if c1.rep == c2.rep and c1.vectors.shape == c2.vectors.shape:
        a = _normalize_rows(c1.vectors)
        b = _normalize_rows(c2.vectors)
        if a.shape == b.shape:
            key = lambda m: m[np.lexsort(m.T[::-1])] if m.shape[0] else m
            if np.allclose(key(a), key(b), atol=1e-9):
                return True
    # fall back to sampled membership agreement
    n = c1.dim
    probes = [np.eye(n), -np.eye(n)]
    for c in (c1, c2):
        if c.rep == GENERATORS and c.vectors.shape[0]:
            probes.append(_normalize_rows(c.vectors))
    rng = np.random.default_rng(seed)
    probes.append(_normalize_rows(rng.normal(size=(256, n))))
    pts = np.vstack(probes)
    return bool(np.all(cone_contains_many(c1, pts) == cone_contains_many(c2, pts)))


def sample_directions(domain: Cone, samples: int, seed: int) -> np.ndarray:
    """Deterministic direction set inside a domain cone.

    Always includes the coordinate axes (both signs) and the cone's rays
    when they belong to the domain; the remaining directions are seeded
    unit vectors, rejection-filtered into halfspace-represented cones or
    built as nonnegative ray combinations for generator-represented ones.
    """
    n = domain.dim
    deterministic = [np.eye(n), -np.eye(n)]
    if domain.rep == GENERATORS and domain.vectors.shape[0]:
        deterministic.append(_normalize_rows(domain.vectors))
    det = np.vstack(deterministic)
    det = det[cone_contains_many(domain, det)]

    rng = np.random.default_rng(seed)
    accepted: List[np.ndarray] = []
    need = samples
    if domain.rep == GENERATORS:
        rays = domain.vectors
        if rays.shape[0] == 0:
            return det  # the trivial cone has no directions beyond those kept above
        while need > 0:
            lam = np.abs(rng.normal(size=(need, rays.shape[0])))
            pts = _normalize_rows(lam @ rays)
            accepted.append(pts)
            need -= pts.shape[0]
    else:
        attempts = 0
        max_attempts = 400
        batch = max(1024, samples)
        while need > 0 and attempts < max_attempts:
            pts = _normalize_rows(rng.normal(size=(batch, n)))
            pts = pts[cone_contains_many(domain, pts)]
            if pts.shape[0]:
                accepted.append(pts[:need])
                need -= min(pts.shape[0], need)
            attempts += 1
    if accepted:
        return np.vstack([det] + accepted)
    return det


def verify_equivalence(e1: Exhauster, e2: Exhauster, samples: int = 10_000,
                       seed: int = 0) -> EquivalenceReport:
    """Empirical max |h1(g) - h2(g)| over seeded directions in the domain.

    A reduction theorem asserts exact equality on the domain cone, so a
    reported gap above the tolerance falsifies the reduction; the check is
    deterministic for a fixed seed.
    """
    if e1.kind != e2.kind:
        raise KindMismatch(f"cannot compare a {e1.kind} with a {e2.kind} exhauster")
    if e1.dim != e2.dim:
        raise DimensionMismatch("exhauster dimensions differ")
    if not _same_domain(e1.domain, e2.domain):
        raise DomainMismatch("exhauster domain cones differ")

    dirs = sample_directions(e1.domain, samples, seed)
    if dirs.shape[0] == 0:
        return EquivalenceReport(0.0, None, 0)
    v1 = evaluate_many(e1, dirs)
    v2 = evaluate_many(e2, dirs)
    gaps = np.abs(v1 - v2)
    gaps[np.isinf(v1) & np.isinf(v2) & (v1 == v2)] = 0.0
    worst_idx = int(np.argmax(gaps))
    return EquivalenceReport(float(gaps[worst_idx]), dirs[worst_idx], dirs.shape[0])
