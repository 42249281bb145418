"""Deterministic CSV / JSON / SVG emission for trajectories and sweeps.

CSV carries 17 significant digits so identical runs are byte-identical.
The SVG writer is intentionally minimal: polyline time series and scatter,
no external plotting dependency.
"""
from __future__ import annotations

import json
from io import StringIO

import numpy as np

from .dynamics import Trajectory

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def trajectory_to_csv(traj: Trajectory) -> str:
    buf = StringIO()
    n = traj.n
    buf.write("t," + ",".join(f"x_{i + 1}" for i in range(n)) + "\n")
    for t, row in zip(traj.ts, traj.xs):
        buf.write(_fmt(t) + "," + ",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_trajectory_csv(traj: Trajectory, path) -> None:
    with open(path, "w") as fh:
        fh.write(trajectory_to_csv(traj))


def events_to_json(traj: Trajectory) -> str:
    payload = [{"t": float(t), "type": "switch", "detail": desc}
               for t, desc in traj.events]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_events_json(traj: Trajectory, path) -> None:
    with open(path, "w") as fh:
        fh.write(events_to_json(traj))


def _svg_header(width, height, title):
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2}" y="18" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>')
    return parts


def _axes(parts, x0, y0, x1, y1, xmin, xmax, ymin, ymax):
    parts.append(f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" '
                 'stroke="black" stroke-width="1"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" '
                 'stroke="black" stroke-width="1"/>')
    style = 'font-family="sans-serif" font-size="10"'
    parts.append(f'<text x="{x0}" y="{y1 + 14}" {style}>{xmin:.4g}</text>')
    parts.append(f'<text x="{x1}" y="{y1 + 14}" text-anchor="end" {style}>'
                 f'{xmax:.4g}</text>')
    parts.append(f'<text x="{x0 - 4}" y="{y1}" text-anchor="end" {style}>'
                 f'{ymin:.4g}</text>')
    parts.append(f'<text x="{x0 - 4}" y="{y0 + 8}" text-anchor="end" {style}>'
                 f'{ymax:.4g}</text>')


def _scale(vmin, vmax):
    if vmax <= vmin:
        vmax = vmin + 1.0
    return vmin, vmax


def svg_timeseries(traj: Trajectory, path, title: str = "") -> None:
    """One polyline per agent, t on the horizontal axis."""
    width, height = 640, 400
    x0, y0, x1, y1 = 50, 30, width - 15, height - 30
    tmin, tmax = _scale(float(traj.ts[0]), float(traj.ts[-1]))
    ymin, ymax = _scale(float(traj.xs.min()), float(traj.xs.max()))
    parts = _svg_header(width, height, title)
    _axes(parts, x0, y0, x1, y1, tmin, tmax, ymin, ymax)
    px = x0 + (traj.ts - tmin) / (tmax - tmin) * (x1 - x0)
    for i in range(traj.n):
        py = y1 - (traj.xs[:, i] - ymin) / (ymax - ymin) * (y1 - y0)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = _PALETTE[i % len(_PALETTE)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     'stroke-width="1.2"/>')
    for t, _ in traj.events:
        ex = x0 + (t - tmin) / (tmax - tmin) * (x1 - x0)
        parts.append(f'<line x1="{ex:.2f}" y1="{y0}" x2="{ex:.2f}" y2="{y1}" '
                     'stroke="#999999" stroke-dasharray="4 3"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def svg_scatter(xs, series, path, title: str = "") -> None:
    """Scatter of one or more y-series against a common x array."""
    width, height = 640, 400
    x0, y0, x1, y1 = 55, 30, width - 15, height - 30
    xs = np.asarray(xs, dtype=np.float64)
    all_y = np.concatenate([np.asarray(s, dtype=np.float64) for s in series])
    finite = all_y[np.isfinite(all_y)]
    xmin, xmax = _scale(float(xs.min()), float(xs.max()))
    ymin, ymax = _scale(float(finite.min()) if finite.size else 0.0,
                        float(finite.max()) if finite.size else 1.0)
    parts = _svg_header(width, height, title)
    _axes(parts, x0, y0, x1, y1, xmin, xmax, ymin, ymax)
    for si, s in enumerate(series):
        color = _PALETTE[si % len(_PALETTE)]
        for xv, yv in zip(xs, np.asarray(s, dtype=np.float64)):
            if not np.isfinite(yv):
                continue
            cx = x0 + (xv - xmin) / (xmax - xmin) * (x1 - x0)
            cy = y1 - (yv - ymin) / (ymax - ymin) * (y1 - y0)
            parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2.2" '
                         f'fill="{color}"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
