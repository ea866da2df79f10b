"""Minimal static SVG output: critical curves and regime maps on a log-v axis."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .curves import FINITE, CriticalCurve
from .regimes import Regime, RegimeMap

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 50

REGIME_COLORS = {
    Regime.PERSISTENCE: "#8fd18f",
    Regime.EXTINCTION_Y: "#8fb8e8",
    Regime.EXTINCTION_X: "#f0b27a",
    Regime.RANDOM_EXTINCTION: "#d7a0d9",
    Regime.BOUNDARY: "#ffffff",
}


class _Frame:
    def __init__(self, v_min: float, v_max: float):
        self.lo = math.log10(v_min)
        self.hi = math.log10(v_max)
        self.w = WIDTH - LEFT - RIGHT
        self.h = HEIGHT - TOP - BOTTOM

    def x(self, u):
        return LEFT + u * self.w

    def y(self, v):
        return TOP + (self.hi - math.log10(v)) / (self.hi - self.lo) * self.h


def _axes(frame: _Frame, title: str) -> list[str]:
    parts = [
        f'<rect x="{LEFT}" y="{TOP}" width="{frame.w}" height="{frame.h}" fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{TOP - 15}" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="13">u</text>',
        f'<text x="18" y="{TOP + frame.h / 2}" font-size="13" '
        f'transform="rotate(-90 18 {TOP + frame.h / 2})" text-anchor="middle">v (log scale)</text>',
    ]
    for k in range(6):
        u = k / 5
        parts.append(
            f'<text x="{frame.x(u):.1f}" y="{TOP + frame.h + 18}" text-anchor="middle" font-size="11">{u:.1f}</text>'
        )
    for e in range(math.ceil(frame.lo), math.floor(frame.hi) + 1):
        y = frame.y(10.0**e)
        parts.append(f'<line x1="{LEFT - 5}" y1="{y:.1f}" x2="{LEFT}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{LEFT - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">1e{e}</text>')
    return parts


def _document(parts: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    return "\n".join([head, f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>', *parts, "</svg>"]) + "\n"


def curves_svg(curves: list[tuple[CriticalCurve, str, str]], title: str,
               v_min: float = 1e-3, v_max: float = 1e3) -> str:
    """Plot ``(curve, color, legend)`` triples; finite runs become polylines, clipped to the frame."""
    frame = _Frame(v_min, v_max)
    parts = _axes(frame, title)
    parts.append(f'<clipPath id="frame"><rect x="{LEFT}" y="{TOP}" width="{frame.w}" height="{frame.h}"/></clipPath>')
    for k, (curve, color, legend) in enumerate(curves):
        run: list[str] = []
        runs = []
        for u, ev in zip(curve.u_grid, curve.values):
            if ev.kind == FINITE:
                run.append(f"{frame.x(u):.2f},{frame.y(ev.v):.2f}")
            elif run:
                runs.append(run)
                run = []
        if run:
            runs.append(run)
        for pts in runs:
            parts.append(
                f'<polyline points="{" ".join(pts)}" fill="none" stroke="{color}" '
                f'stroke-width="2" clip-path="url(#frame)"/>'
            )
        ly = TOP + 15 + 16 * k
        parts.append(f'<line x1="{LEFT + 10}" y1="{ly}" x2="{LEFT + 35}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{LEFT + 40}" y="{ly + 4}" font-size="12">{escape(legend)}</text>')
    return _document(parts)


def regime_map_svg(rmap: RegimeMap, title: str) -> str:
    v = rmap.v_grid
    frame = _Frame(float(v[0]), float(v[-1]))
    parts = []
    u_edges = np.concatenate([[0.0], 0.5 * (rmap.u_grid[1:] + rmap.u_grid[:-1]), [1.0]])
    lv = np.log10(v)
    v_edges = 10.0 ** np.concatenate([[lv[0]], 0.5 * (lv[1:] + lv[:-1]), [lv[-1]]])
    for i in range(len(rmap.u_grid)):
        x0, x1 = frame.x(u_edges[i]), frame.x(u_edges[i + 1])
        for j in range(len(v)):
            y0, y1 = frame.y(v_edges[j + 1]), frame.y(v_edges[j])
            color = REGIME_COLORS[Regime(int(rmap.labels[i, j]))]
            parts.append(
                f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0 + 0.3:.2f}" '
                f'height="{y1 - y0 + 0.3:.2f}" fill="{color}"/>'
            )
    parts.extend(_axes(frame, title))
    for k, regime in enumerate(r for r in Regime if r is not Regime.BOUNDARY):
        ly = TOP + 15 + 16 * k
        parts.append(f'<rect x="{LEFT + 10}" y="{ly - 8}" width="12" height="12" fill="{REGIME_COLORS[regime]}" stroke="black"/>')
        parts.append(f'<text x="{LEFT + 28}" y="{ly + 3}" font-size="12">{regime.slug}</text>')
    return _document(parts)
