"""Set order relations on bounded convex bodies and extremal subfamilies.

For a cone D the two relations are

    A <=m1 B   iff   (B -. A) & D    is nonempty
    A <=m2 B   iff   (A -. B) & (-D) is nonempty

Both are partial orders on bounded sets when D is convex, closed and
pointed; pointedness is not enforced here (the reduction cones K = N(T)
may have empty interior), so antisymmetry can fail for exotic cones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Set

import numpy as np

from .bodies import Body, EmptyBody, bodies_equal, minkowski_diff
from .cones import Cone, intersect_nonempty, negate_cone


@dataclass(frozen=True)
class OrderCheck:
    """Verdict of one relation query; `witness` certifies a positive verdict."""

    holds: bool
    witness: Optional[np.ndarray] = None


def precedes_m1(a: Body, b: Body, cone: Cone) -> OrderCheck:
    """Check  a <=m1 b, i.e. (b -. a) meets the cone."""
    diff = minkowski_diff(b, a)
    if isinstance(diff, EmptyBody):
        return OrderCheck(False)
    w = intersect_nonempty(diff, cone)
    return OrderCheck(w is not None, w)


def precedes_m2(a: Body, b: Body, cone: Cone) -> OrderCheck:
    """Check  a <=m2 b, i.e. (a -. b) meets the reflected cone."""
    diff = minkowski_diff(a, b)
    if isinstance(diff, EmptyBody):
        return OrderCheck(False)
    w = intersect_nonempty(diff, negate_cone(cone))
    return OrderCheck(w is not None, w)


def _strictly_below_m1(a: Body, b: Body, cone: Cone) -> bool:
    """a <=m1 b with a and b distinct as sets."""
    return precedes_m1(a, b, cone).holds and not bodies_equal(a, b)


def m1_minimal_family(members: Sequence[Body], cone: Cone) -> Set[int]:
    """Indices of members not strictly preceded (m1) by any distinct member.

    Nonempty for every nonempty finite family: a finite partially ordered
    family always has minimal elements.
    """
    keep = set()
    for i, candidate in enumerate(members):
        dominated = any(
            j != i and _strictly_below_m1(other, candidate, cone)
            for j, other in enumerate(members))
        if not dominated:
            keep.add(i)
    return keep


def m2_maximal_family(members: Sequence[Body], cone: Cone) -> Set[int]:
    """Indices of members not strictly below (m2) any distinct member."""
    keep = set()
    for i, candidate in enumerate(members):
        exceeded = any(
            j != i
            and precedes_m2(candidate, other, cone).holds
            and not bodies_equal(candidate, other)
            for j, other in enumerate(members))
        if not exceeded:
            keep.add(i)
    return keep
