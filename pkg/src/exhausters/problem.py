"""Problem files: the JSON schema the CLI consumes and emits.

A problem bundles one exhauster with optional cones:

    {
      "dimension": 2,
      "exhauster": {"kind": "lower", "members": [
          {"ball": {"center": [0.0, 0.0], "radius": 1.0}},
          {"vpolytope": {"vertices": [[0, 0], [1, 0]]}},
          {"hpolyhedron": {"halfspaces": [{"normal": [1, 0], "offset": 1.0}]}}
      ]},
      "cone_T": {"halfspaces": [[-1, 1], [-1, -1]]},
      "cone_K": {"generators": [[-1, 1], [-1, -1]]},
      "decomposition": [{"generators": [[1, 1], [1, -1]]}]
    }

cone_T (the domain), cone_K (the order cone) and the decomposition are
optional; when cone_K is absent it is derived as the negative dual of
cone_T.  Every vector must have length `dimension`.  Validation happens
up front and raises ProblemFormatError with a path to the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bodies import Ball, Body, HPolyhedron, VPolytope
from .cones import Cone, negative_dual
from .errors import MissingConfiguration, ProblemFormatError
from .exhauster import LOWER, UPPER, Exhauster


@dataclass
class Problem:
    dimension: int
    exhauster: Exhauster
    cone_T: Optional[Cone] = None
    cone_K: Optional[Cone] = None
    decomposition: Optional[list] = None

    def order_cone(self) -> Cone:
        """cone_K, deriving it from cone_T (negative dual) when absent."""
        if self.cone_K is not None:
            return self.cone_K
        if self.cone_T is not None:
            return negative_dual(self.cone_T)
        raise MissingConfiguration(
            "the command needs cone_K, or cone_T to derive it from")


def _fail(path: str, message: str):
    raise ProblemFormatError(f"{path}: {message}")


def _require(cond: bool, path: str, message: str):
    if not cond:
        _fail(path, message)


def _vector(raw, dim: int, path: str) -> np.ndarray:
    _require(isinstance(raw, (list, tuple)), path, "expected a list of numbers")
    _require(len(raw) == dim, path, f"expected {dim} entries, got {len(raw)}")
    try:
        v = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        _fail(path, "entries must be numbers")
    _require(bool(np.all(np.isfinite(v))), path, "entries must be finite")
    return v


def _vector_list(raw, dim: int, path: str) -> np.ndarray:
    _require(isinstance(raw, (list, tuple)), path, "expected a list of vectors")
    rows = [_vector(r, dim, f"{path}[{i}]") for i, r in enumerate(raw)]
    return np.array(rows) if rows else np.zeros((0, dim))


def _parse_body(raw, dim: int, path: str) -> Body:
    _require(isinstance(raw, dict) and len(raw) == 1, path,
             'expected exactly one of "ball" | "vpolytope" | "hpolyhedron"')
    (tag, spec), = raw.items()
    if tag == "ball":
        _require(isinstance(spec, dict), path, "ball spec must be an object")
        _require("center" in spec and "radius" in spec, path,
                 "ball needs center and radius")
        center = _vector(spec["center"], dim, f"{path}.ball.center")
        radius = spec["radius"]
        _require(isinstance(radius, (int, float)) and np.isfinite(radius)
                 and radius >= 0, f"{path}.ball.radius", "must be a real >= 0")
        return Ball(center, float(radius))
    if tag == "vpolytope":
        _require(isinstance(spec, dict) and "vertices" in spec, path,
                 "vpolytope needs a vertices list")
        verts = _vector_list(spec["vertices"], dim, f"{path}.vpolytope.vertices")
        _require(verts.shape[0] >= 1, f"{path}.vpolytope.vertices", "must be nonempty")
        return VPolytope(verts)
    if tag == "hpolyhedron":
        _require(isinstance(spec, dict) and "halfspaces" in spec, path,
                 "hpolyhedron needs a halfspaces list")
        hs = spec["halfspaces"]
        _require(isinstance(hs, list), f"{path}.hpolyhedron.halfspaces", "expected a list")
        normals, offsets = [], []
        for i, h in enumerate(hs):
            hp = f"{path}.hpolyhedron.halfspaces[{i}]"
            _require(isinstance(h, dict) and "normal" in h and "offset" in h,
                     hp, "each halfspace needs normal and offset")
            normals.append(_vector(h["normal"], dim, f"{hp}.normal"))
            off = h["offset"]
            _require(isinstance(off, (int, float)) and np.isfinite(off),
                     f"{hp}.offset", "must be a finite real")
            offsets.append(float(off))
        N = np.array(normals) if normals else np.zeros((0, dim))
        return HPolyhedron(N, np.array(offsets), dim)
    _fail(path, f"unknown body kind {tag!r}")


def _parse_cone(raw, dim: int, path: str) -> Cone:
    _require(isinstance(raw, dict) and len(raw) == 1, path,
             'expected exactly one of "generators" | "halfspaces"')
    (tag, vecs), = raw.items()
    _require(tag in ("generators", "halfspaces"), path, f"unknown cone kind {tag!r}")
    mat = _vector_list(vecs, dim, f"{path}.{tag}")
    return Cone(tag, mat, dim)


def parse_problem(data: dict) -> Problem:
    """Validate a decoded JSON object and build the Problem."""
    _require(isinstance(data, dict), "$", "problem file must be a JSON object")
    _require("dimension" in data, "$", 'missing "dimension"')
    dim = data["dimension"]
    _require(isinstance(dim, int) and dim >= 1, "dimension", "must be an integer >= 1")

    _require("exhauster" in data, "$", 'missing "exhauster"')
    ex = data["exhauster"]
    _require(isinstance(ex, dict), "exhauster", "must be an object")
    kind = ex.get("kind")
    _require(kind in (LOWER, UPPER), "exhauster.kind", 'must be "lower" or "upper"')
    raw_members = ex.get("members")
    _require(isinstance(raw_members, list) and raw_members, "exhauster.members",
             "must be a nonempty list")
    members = tuple(_parse_body(m, dim, f"exhauster.members[{i}]")
                    for i, m in enumerate(raw_members))

    cone_T = None
    if data.get("cone_T") is not None:
        cone_T = _parse_cone(data["cone_T"], dim, "cone_T")
    cone_K = None
    if data.get("cone_K") is not None:
        cone_K = _parse_cone(data["cone_K"], dim, "cone_K")
    decomposition = None
    if data.get("decomposition") is not None:
        raw = data["decomposition"]
        _require(isinstance(raw, list) and raw, "decomposition", "must be a nonempty list")
        decomposition = [_parse_cone(c, dim, f"decomposition[{i}]")
                         for i, c in enumerate(raw)]

    domain = cone_T if cone_T is not None else Cone.full_space(dim)
    exhauster = Exhauster(kind, members, domain)
    return Problem(dim, exhauster, cone_T, cone_K, decomposition)


def load_problem(path: str) -> Problem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path} is not valid JSON: {exc}") from exc
    return parse_problem(data)


def _body_to_dict(body: Body) -> dict:
    if isinstance(body, Ball):
        return {"ball": {"center": [float(v) for v in body.center],
                         "radius": float(body.radius)}}
    if isinstance(body, VPolytope):
        return {"vpolytope": {"vertices": [[float(v) for v in row]
                                           for row in body.vertices]}}
    if isinstance(body, HPolyhedron):
        return {"hpolyhedron": {"halfspaces": [
            {"normal": [float(v) for v in a], "offset": float(b)}
            for a, b in zip(body.normals, body.offsets)]}}
    raise ProblemFormatError("the empty body has no problem-file encoding")


def _cone_to_dict(cone: Cone) -> dict:
    return {cone.rep: [[float(v) for v in row] for row in cone.vectors]}


def problem_to_dict(problem: Problem) -> dict:
    data = {
        "dimension": problem.dimension,
        "exhauster": {
            "kind": problem.exhauster.kind,
            "members": [_body_to_dict(m) for m in problem.exhauster.members],
        },
    }
    if problem.cone_T is not None:
        data["cone_T"] = _cone_to_dict(problem.cone_T)
    if problem.cone_K is not None:
        data["cone_K"] = _cone_to_dict(problem.cone_K)
    if problem.decomposition is not None:
        data["decomposition"] = [_cone_to_dict(c) for c in problem.decomposition]
    return data


def save_problem(problem: Problem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(problem), fh, indent=2)
        fh.write("\n")
