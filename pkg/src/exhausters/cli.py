"""Batch command-line front-end.

Subcommands: eval | reduce | compare | optimality | verify | export.
Results go to stdout (a bare number, JSON, or CSV); diagnostics go to
stderr.  Exit codes are stable:

    0  success (verify: gap within tolerance)
    1  verify found a gap above the tolerance
    2  problem-file schema or usage error
    3  dimension mismatch in CLI inputs
    4  missing/unsuitable cone configuration (also wrong exhauster kind)
    5  unsupported geometric operand pair

The global tolerance honors the EXH_TOLERANCE environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import config
from .errors import (ConversionUnavailable, DimensionMismatch, DomainMismatch,
                     DomainNotFullSpace, ExhausterError, KindMismatch,
                     MissingConfiguration, ProblemFormatError, UnsupportedPair,
                     WrongKind)
from .exhauster import (LOWER, Exhauster, ReductionReport, Removal, evaluate,
                        optimality_check, reduce_by_cover, reduce_pairwise,
                        verify_equivalence)
from .order import precedes_m1, precedes_m2
from .problem import Problem, load_problem, save_problem


def _err(message: str) -> None:
    print(f"exhausters: {message}", file=sys.stderr)


def _emit_json(data: dict) -> None:
    print(json.dumps(data, indent=2))


def _parse_direction(raw: str, dim: int) -> np.ndarray:
    parts = [p for p in raw.replace(",", " ").split() if p]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ProblemFormatError(f"cannot parse direction {raw!r}")
    if len(values) != dim:
        raise DimensionMismatch(
            f"direction has {len(values)} entries, problem dimension is {dim}")
    return np.array(values)


def _format_value(value: float) -> str:
    if np.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # normalize -0.0
    return f"{value:.12f}"


def cmd_eval(args) -> int:
    problem = load_problem(args.file)
    g = _parse_direction(args.direction, problem.dimension)
    value = evaluate(problem.exhauster, g)
    print(_format_value(value))
    return 0


def _removals_with_offset(report: ReductionReport, index_map: List[int]) -> List[Removal]:
    """Map removal/by indices of a sub-family report back to original positions."""
    out = []
    for r in report.removed:
        out.append(Removal(index_map[r.index], r.rule, r.witness,
                           tuple(index_map[j] for j in r.by)))
    return out


def cmd_reduce(args) -> int:
    problem = load_problem(args.file)
    exh = problem.exhauster
    original_count = len(exh.members)
    removals: List[Removal] = []
    hint = False
    index_map = list(range(original_count))

    ran_any = False
    if args.method in ("pairwise", "auto"):
        if args.method == "pairwise" or problem.cone_K is not None or problem.cone_T is not None:
            cone = problem.order_cone()
            exh, rep = reduce_pairwise(exh, cone)
            removals += _removals_with_offset(rep, index_map)
            hint = rep.minimal_by_inclusion_hint
            index_map = [index_map[i] for i in sorted(rep.survivors)]
            ran_any = True
        else:
            _err("auto: no cone_K/cone_T in the file, skipping the pairwise stage")
    if args.method in ("cover", "auto"):
        if exh.kind == LOWER and exh.domain.is_full_space:
            exh, rep = reduce_by_cover(exh)
            removals += _removals_with_offset(rep, index_map)
            index_map = [index_map[i] for i in sorted(rep.survivors)]
            ran_any = True
        elif args.method == "cover":
            raise DomainNotFullSpace(
                "cover reduction needs a lower exhauster with domain R^n")
        else:
            _err("auto: cover stage skipped (needs a lower exhauster on R^n)")
    if not ran_any:
        raise MissingConfiguration(
            "no reduction applicable: supply cone_K/cone_T or a full-space lower exhauster")

    out_path = args.out or str(Path(args.file).with_suffix(".reduced.json"))
    reduced_problem = Problem(problem.dimension, exh, problem.cone_T,
                              problem.cone_K, problem.decomposition)
    save_problem(reduced_problem, out_path)

    if args.plot:
        from .plotting import members_figure
        members_figure(args.plot,
                       [("original", problem.exhauster), ("reduced", exh)],
                       cone=problem.cone_K or problem.cone_T)

    _emit_json({
        "method": args.method,
        "original_members": original_count,
        "removed": [r.to_dict() for r in removals],
        "survivors": index_map,
        "minimal_by_inclusion_hint": hint,
        "output_file": out_path,
    })
    return 0


def cmd_compare(args) -> int:
    problem = load_problem(args.file)
    members = problem.exhauster.members
    for idx in (args.i, args.j):
        if idx < 0 or idx >= len(members):
            raise ProblemFormatError(
                f"member index {idx} out of range 0..{len(members) - 1}")
    cone = problem.order_cone()
    if args.relation == "m1":
        chk = precedes_m1(members[args.i], members[args.j], cone)
    else:
        chk = precedes_m2(members[args.i], members[args.j], cone)
    _emit_json({
        "relation": args.relation,
        "lhs": args.i,
        "rhs": args.j,
        "holds": chk.holds,
        "witness": None if chk.witness is None else [float(v) for v in chk.witness],
    })
    return 0


def cmd_optimality(args) -> int:
    problem = load_problem(args.file)
    if not problem.decomposition:
        raise MissingConfiguration("optimality needs a decomposition in the problem file")
    report = optimality_check(problem.exhauster, problem.decomposition)
    _emit_json(report.to_dict())
    return 0


def cmd_verify(args) -> int:
    original = load_problem(args.file_original)
    reduced = load_problem(args.file_reduced)
    report = verify_equivalence(original.exhauster, reduced.exhauster,
                                samples=args.samples, seed=args.seed)
    tol = config.tolerance()
    equivalent = report.max_abs_gap <= tol
    data = report.to_dict()
    data["tolerance"] = tol
    data["equivalent"] = equivalent
    _emit_json(data)
    return 0 if equivalent else 1


def _export_directions(dim: int, grid: int, seed: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        ang = 2.0 * np.pi * np.arange(grid) / grid
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if dim == 3:
        theta = 2.0 * np.pi * np.arange(grid) / grid
        phi = np.pi * (np.arange(grid) + 0.5) / grid
        th, ph = np.meshgrid(theta, phi)
        return np.column_stack([
            (np.sin(ph) * np.cos(th)).ravel(),
            (np.sin(ph) * np.sin(th)).ravel(),
            np.cos(ph).ravel(),
        ])
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(grid * grid, dim))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def cmd_export(args) -> int:
    from .cones import cone_contains_many
    from .exhauster import evaluate_many

    problem = load_problem(args.file)
    exh = problem.exhauster
    dirs = _export_directions(problem.dimension, args.grid, args.seed)
    dirs = dirs[cone_contains_many(exh.domain, dirs)]
    header = ",".join(f"g{i + 1}" for i in range(problem.dimension)) + ",h"
    lines = [header]
    if dirs.shape[0]:
        values = evaluate_many(exh, dirs)
        for g, h in zip(dirs, values):
            row = [float(c) + 0.0 for c in g] + [float(h) + 0.0]  # +0.0 drops -0.0
            lines.append(",".join(repr(c) for c in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)

    if args.plot:
        from .plotting import profile_figure
        profile_figure(args.plot, [("h", exh)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exhausters",
        description="Evaluate, reduce, and check finite exhausters of "
                    "positively homogeneous functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate the represented function at a direction")
    p.add_argument("file", help="problem JSON file")
    p.add_argument("direction", help='direction vector, e.g. "1,0"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reduce", help="remove redundant members")
    p.add_argument("file")
    p.add_argument("--method", choices=["pairwise", "cover", "auto"], default="auto")
    p.add_argument("--out", help="path of the reduced problem file "
                                 "(default: <file>.reduced.json)")
    p.add_argument("--plot", help="render a before/after geometry PNG (2-D only)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("compare", help="check one set-order relation between two members")
    p.add_argument("file")
    p.add_argument("i", type=int, help="left member index (0-based)")
    p.add_argument("j", type=int, help="right member index (0-based)")
    p.add_argument("--relation", choices=["m1", "m2"], default="m1")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("optimality", help="zero-maximality conditions over the decomposition")
    p.add_argument("file")
    p.set_defaults(func=cmd_optimality)

    p = sub.add_parser("verify", help="sampled equivalence of two problem files")
    p.add_argument("file_original")
    p.add_argument("file_reduced")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="CSV of (direction, h) over a sphere grid")
    p.add_argument("file")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--plot", help="render a directional-profile PNG (2-D only)")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    config.reload_from_env()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFormatError as exc:
        _err(str(exc))
        return 2
    except DimensionMismatch as exc:
        _err(str(exc))
        return 3
    except (MissingConfiguration, WrongKind, DomainNotFullSpace,
            KindMismatch, DomainMismatch) as exc:
        _err(str(exc))
        return 4
    except (UnsupportedPair, ConversionUnavailable) as exc:
        _err(str(exc))
        return 5
    except ExhausterError as exc:  # anything else from the library
        _err(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
