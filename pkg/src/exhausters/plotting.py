"""Figure rendering for 2-D problems (headless matplotlib).

The CLI's report path can drop PNG files next to its CSV/JSON output:
a directional profile of the represented function and a geometry view
of the member bodies with the relevant cones.
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .bodies import Ball, Body, HPolyhedron, VPolytope, bounding_box, vertices_of
from .cones import GENERATORS, Cone, cone_contains_many
from .errors import DimensionMismatch
from .exhauster import Exhauster, evaluate_many

_STYLE = {
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.axisbelow": True,
    "figure.dpi": 110,
    "font.size": 9,
    "legend.fontsize": 8,
}


def _require_2d(dim: int, what: str):
    if dim != 2:
        raise DimensionMismatch(f"{what} figures are implemented for 2-D problems only")


def profile_figure(path: str, labeled: Sequence[Tuple[str, Exhauster]],
                   grid: int = 720) -> None:
    """Plot h(cos t, sin t) over the circle for each labeled exhauster.

    Angles outside the domain cone are left blank, which makes the domain
    of a generalized exhauster visible in the figure.
    """
    if not labeled:
        raise ValueError("need at least one exhauster to plot")
    _require_2d(labeled[0][1].dim, "profile")
    angles = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 3.6))
        for label, exh in labeled:
            inside = cone_contains_many(exh.domain, dirs)
            vals = np.full(grid, np.nan)
            if inside.any():
                vals[inside] = evaluate_many(exh, dirs[inside])
            ax.plot(angles, vals, label=label, lw=1.4)
        ax.set_xlabel("direction angle (rad)")
        ax.set_ylabel("h")
        ax.set_xlim(0, 2 * np.pi)
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def _viewport(members: Sequence[Body]) -> Tuple[float, float, float, float]:
    los, his = [], []
    for m in members:
        lo, hi = bounding_box(m)
        lo = np.where(np.isfinite(lo), lo, -2.0)
        hi = np.where(np.isfinite(hi), hi, 2.0)
        los.append(lo)
        his.append(hi)
    lo = np.min(los, axis=0) - 0.6
    hi = np.max(his, axis=0) + 0.6
    return float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1])


def _polygon_points(poly: HPolyhedron, view) -> Optional[np.ndarray]:
    x0, x1, y0, y1 = view
    box_n = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    box_b = np.array([x1, -x0, y1, -y0])
    clipped = HPolyhedron(np.vstack([poly.normals, box_n]),
                          np.concatenate([poly.offsets, box_b]), 2)
    verts, _ = vertices_of(clipped)
    if verts.shape[0] < 3:
        return verts if verts.shape[0] else None
    center = verts.mean(axis=0)
    order = np.argsort(np.arctan2(*(verts - center).T[::-1]))
    return verts[order]


def _draw_body(ax, body: Body, color: str, label: str, view) -> None:
    if isinstance(body, Ball):
        ax.add_patch(plt.Circle(body.center, max(body.radius, 0.015),
                                fill=False, color=color, lw=1.5, label=label))
        ax.plot(*body.center, marker="+", color=color, ms=5)
        return
    if isinstance(body, VPolytope):
        pts = body.vertices
        if pts.shape[0] == 1:
            ax.plot(*pts[0], marker="o", color=color, ms=4, label=label)
            return
        center = pts.mean(axis=0)
        order = np.argsort(np.arctan2(*(pts - center).T[::-1]))
        ring = np.vstack([pts[order], pts[order][:1]])
        ax.plot(ring[:, 0], ring[:, 1], color=color, lw=1.5, label=label)
        return
    pts = _polygon_points(body, view)
    if pts is None or pts.shape[0] == 0:
        return
    ring = np.vstack([pts, pts[:1]])
    ax.plot(ring[:, 0], ring[:, 1], color=color, lw=1.5, ls="--", label=label)


def _draw_cone(ax, cone: Cone, color: str, label: str, view) -> None:
    x0, x1, y0, y1 = view
    reach = 1.2 * max(abs(x0), abs(x1), abs(y0), abs(y1))
    if cone.rep == GENERATORS:
        rays = cone.vectors
    else:
        if cone.vectors.shape[0] == 0:
            return  # whole plane: nothing to draw
        # boundary rays of {x : N x <= 0}: perpendiculars kept inside the cone
        cand = []
        for n in cone.vectors:
            cand.append(np.array([n[1], -n[0]]))
            cand.append(np.array([-n[1], n[0]]))
        cand = np.array(cand)
        rays = cand[cone_contains_many(cone, cand)]
    first = True
    for r in rays:
        nrm = np.linalg.norm(r)
        if nrm < 1e-12:
            continue
        tip = reach * r / nrm
        ax.plot([0, tip[0]], [0, tip[1]], color=color, lw=1.0, alpha=0.8,
                label=label if first else None)
        first = False
    if rays.shape[0] >= 2:
        span = np.array([reach * r / np.linalg.norm(r) for r in rays
                         if np.linalg.norm(r) > 1e-12])
        if span.shape[0] >= 2:
            wedge = np.vstack([[0.0, 0.0], span])
            ax.fill(wedge[:, 0], wedge[:, 1], color=color, alpha=0.08)


def members_figure(path: str, panels: Sequence[Tuple[str, Exhauster]],
                   cone: Optional[Cone] = None) -> None:
    """Side-by-side geometry panels (e.g. family before vs after a reduction)."""
    if not panels:
        raise ValueError("need at least one panel")
    _require_2d(panels[0][1].dim, "geometry")
    cmap = plt.get_cmap("tab10")
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(1, len(panels),
                                 figsize=(4.2 * len(panels), 4.2), squeeze=False)
        view = _viewport([m for _, e in panels for m in e.members])
        for ax, (title, exh) in zip(axes[0], panels):
            for k, member in enumerate(exh.members):
                _draw_body(ax, member, cmap(k % 10), f"member {k}", view)
            if cone is not None:
                _draw_cone(ax, cone, "black", "cone", view)
            ax.set_title(title)
            ax.set_xlim(view[0], view[1])
            ax.set_ylim(view[2], view[3])
            ax.set_aspect("equal")
            ax.legend(loc="upper right")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
