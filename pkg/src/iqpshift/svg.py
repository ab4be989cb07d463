"""Hand-emitted SVG phase diagram: log-log axes, boundary curve and device points."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .phase import MarginReport, PhaseParams, Regime, critical_depth_curve

CURVE_POINTS = 512
WIDTH, HEIGHT = 640, 460
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 30, 55
COLORS = {Regime.SIMULATABLE: "#1f77b4", Regime.POTENTIALLY_HARD: "#d62728",
          Regime.BOUNDARY: "#7f7f7f"}


def _decades(lo: float, hi: float) -> list[float]:
    return [10.0 ** e for e in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)]


def phase_svg(reports: Sequence[MarginReport], params: PhaseParams = PhaseParams(),
              title: str = "") -> str:
    """Phase diagram with the boundary sampled at 512 log-spaced noise values."""
    ps = [r.point.p_eff for r in reports] or [1e-3]
    ds = [r.point.D for r in reports] or [10.0]
    p_lo = 10 ** math.floor(math.log10(min(ps)) - 0.5)
    p_hi = min(params.p_max * 0.999, 10 ** math.ceil(math.log10(max(ps)) + 0.3))
    curve_p = np.logspace(math.log10(p_lo), math.log10(p_hi), CURVE_POINTS)
    curve_d = critical_depth_curve(curve_p, params)
    d_lo = 10 ** math.floor(math.log10(max(1.0, min(min(ds), curve_d.min()))))
    d_hi = 10 ** math.ceil(math.log10(max(max(ds), min(curve_d.max(), 10 * max(ds)))))
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B
    lx0, lx1 = math.log10(p_lo), math.log10(p_hi)
    ly0, ly1 = math.log10(d_lo), math.log10(d_hi)

    def sx(p):
        return MARGIN_L + (math.log10(p) - lx0) / (lx1 - lx0) * pw

    def sy(d):
        d = min(max(d, d_lo), d_hi)
        return MARGIN_T + ph - (math.log10(d) - ly0) / (ly1 - ly0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{MARGIN_L}" y="18" font-size="13">{escape(title)}</text>')
    out.append(f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
               'fill="none" stroke="black"/>')
    for p in _decades(p_lo, p_hi):
        if p_lo <= p <= p_hi:
            x = sx(p)
            out.append(f'<line x1="{x:.2f}" y1="{MARGIN_T + ph}" x2="{x:.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{x:.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{p:g}</text>')
    for d in _decades(d_lo, d_hi):
        if d_lo <= d <= d_hi:
            y = sy(d)
            out.append(f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" stroke="black"/>')
            out.append(f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" text-anchor="end">{d:g}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2}" y="{HEIGHT - 12}" text-anchor="middle">effective noise p</text>')
    out.append(f'<text transform="translate(16 {MARGIN_T + ph / 2}) rotate(-90)" '
               'text-anchor="middle">depth D</text>')
    pts = " ".join(f"{sx(p):.2f},{sy(d):.2f}" for p, d in zip(curve_p, curve_d))
    out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    for i, r in enumerate(reports):
        x, y = sx(r.point.p_eff), sy(r.point.D)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="{COLORS[r.regime]}"/>')
        ly = MARGIN_T + 14 * (i + 1)
        out.append(f'<circle cx="{WIDTH - MARGIN_R + 14}" cy="{ly - 4}" r="4" fill="{COLORS[r.regime]}"/>')
        out.append(f'<text x="{WIDTH - MARGIN_R + 22}" y="{ly}">{escape(r.point.label)}</text>')
    out.append(f'<text x="{WIDTH - MARGIN_R + 8}" y="{HEIGHT - 12}">c = {params.c:g}, k = {params.k}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
