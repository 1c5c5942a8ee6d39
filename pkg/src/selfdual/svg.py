"""Deterministic SVG rendering of polygons and sampled curves in an affine chart.

Output depends only on the input coordinates: fixed viewBox, fixed stroke
order, coordinates printed with 6 decimals.
"""

from __future__ import annotations

import numpy as np

SIZE = 400.0
MARGIN = 20.0
CLIP = 50.0  # chart coordinates beyond this are treated as near infinity


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def chart_points(V, chart: int = 2):
    """Affine coordinates in the chart ``x[chart] = 1``; NaN near the line at infinity."""
    V = np.real(np.asarray(V, dtype=complex))
    w = V[:, chart]
    keep = [k for k in range(3) if k != chart]
    with np.errstate(divide="ignore", invalid="ignore"):
        P = V[:, keep] / w[:, None]
    bad = ~np.isfinite(P).all(axis=1) | (np.abs(P) > CLIP).any(axis=1)
    P[bad] = np.nan
    return P


class _Frame:
    def __init__(self, pts):
        good = pts[np.isfinite(pts).all(axis=1)]
        if len(good) == 0:
            good = np.zeros((1, 2))
        lo, hi = good.min(axis=0), good.max(axis=0)
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
        self.scale = (SIZE - 2 * MARGIN) / span
        self.cx, self.cy = (lo + hi) / 2

    def __call__(self, p):
        x = SIZE / 2 + (p[0] - self.cx) * self.scale
        y = SIZE / 2 - (p[1] - self.cy) * self.scale
        return _fmt(x), _fmt(y)


def _header(title):
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{int(SIZE)}" '
        f'height="{int(SIZE)}" viewBox="0 0 {int(SIZE)} {int(SIZE)}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{int(SIZE)}" height="{int(SIZE)}" fill="white"/>',
    ]


def _polylines(P, frame, closed):
    """Split at NaN gaps and return SVG path data for each run."""
    runs, cur = [], []
    for p in P:
        if np.isfinite(p).all():
            cur.append(frame(p))
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    if closed and len(runs) > 1 and np.isfinite(P[0]).all() and np.isfinite(P[-1]).all():
        runs[0] = runs.pop() + runs[0]
        closed = False
    out = []
    for r in runs:
        d = "M " + " L ".join(f"{x} {y}" for x, y in r)
        if closed and len(runs) == 1:
            d += " Z"
        out.append(d)
    return out


def render_polygon(V, chart: int = 2, title: str = "polygon") -> str:
    P = chart_points(V, chart)
    frame = _Frame(P)
    lines = _header(title)
    for d in _polylines(P, frame, closed=True):
        lines.append(f'<path d="{d}" fill="none" stroke="black" stroke-width="1.5"/>')
    for j, p in enumerate(P):
        if np.isfinite(p).all():
            x, y = frame(p)
            lines.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#c0392b"><title>A{2 * j + 1}</title></circle>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_curves(curves, chart: int = 2, title: str = "curve", closed=True) -> str:
    """Draw several sampled curves (lists of homogeneous points) in one frame."""
    colours = ["black", "#2471a3", "#c0392b", "#229954"]
    Ps = [chart_points(c, chart) for c in curves]
    frame = _Frame(np.vstack(Ps))
    lines = _header(title)
    for k, P in enumerate(Ps):
        col = colours[k % len(colours)]
        for d in _polylines(P, frame, closed):
            lines.append(f'<path d="{d}" fill="none" stroke="{col}" stroke-width="1.2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
