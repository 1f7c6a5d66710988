"""Minimal static SVG scatter plot of fidelity against tau."""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .experiments import FidelitySeries

WIDTH, HEIGHT = 800, 500
MARGIN = dict(left=70, right=160, top=40, bottom=60)
COLORS = {"leo": "#1f4fbf", "free": "#c62828", "leo-with-id": "#2e7d32"}
LABELS = {"leo": "LEO pulses", "free": "free evolution", "leo-with-id": "LEO + identity"}


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def fidelity_svg(series: Sequence[FidelitySeries], title: str = "") -> str:
    """Scatter + polyline per series; x is tau, y is fidelity in [0, 1]."""
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    taus = [t for s in series for t in s.taus] or [0, 1]
    tmin, tmax = min(0, min(taus)), max(taus)
    if tmax == tmin:
        tmax = tmin + 1

    def px(t: float) -> float:
        return x0 + (t - tmin) / (tmax - tmin) * (x1 - x0)

    def py(f: float) -> float:
        return y0 + f * (y1 - y0)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="13">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for k in range(6):
        f = k / 5
        y = _fmt(py(f))
        out.append(f'<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#e0e0e0"/>')
        out.append(f'<text x="{x0 - 8}" y="{y}" text-anchor="end" dominant-baseline="middle">{f:.1f}</text>')
    for k in range(7):
        t = tmin + k * (tmax - tmin) / 6
        x = _fmt(px(t))
        out.append(f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{y0 + 20}" text-anchor="middle">{t:g}</text>')
    out.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>')
    out.append(f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 15}" text-anchor="middle">tau (pulses)</text>')
    out.append(
        f'<text x="20" y="{(y0 + y1) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {(y0 + y1) / 2})">fidelity</text>'
    )
    if title:
        out.append(f'<text x="{(x0 + x1) / 2}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>')

    for i, s in enumerate(series):
        color = COLORS.get(s.variant, "#555555")
        pts = " ".join(f"{_fmt(px(p.tau))},{_fmt(py(p.fidelity))}" for p in s.points)
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-opacity="0.5"/>')
        for p in s.points:
            out.append(f'<circle cx="{_fmt(px(p.tau))}" cy="{_fmt(py(p.fidelity))}" r="3.5" fill="{color}"/>')
        ly = y1 + 10 + 22 * i
        label = escape(f"{s.experiment}: {LABELS.get(s.variant, s.variant)}")
        out.append(f'<circle cx="{x1 + 18}" cy="{ly}" r="4" fill="{color}"/>')
        out.append(f'<text x="{x1 + 28}" y="{ly}" dominant-baseline="middle">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
