"""Standalone SVG line and scatter charts."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    style: str = "line"


@dataclass
class Chart:
    """A chart with optional log axes; ``render`` returns SVG text."""

    title: str
    xlabel: str
    ylabel: str
    logx: bool = False
    logy: bool = False
    width: int = 640
    height: int = 420
    series: list = field(default_factory=list)

    def add(self, label, x, y, style="line"):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y)
        if self.logx:
            keep &= x > 0
        if self.logy:
            keep &= y > 0
        self.series.append(Series(label, x[keep], y[keep], style))
        return self

    def _tx(self, v, log):
        return np.log10(v) if log else v

    def render(self) -> str:
        left, right, top, bottom = 70, 150, 40, 50
        pw, ph = self.width - left - right, self.height - top - bottom
        xs = [self._tx(s.x, self.logx) for s in self.series if s.x.size]
        ys = [self._tx(s.y, self.logy) for s in self.series if s.y.size]
        x0, x1 = (min(a.min() for a in xs), max(a.max() for a in xs)) if xs else (0.0, 1.0)
        y0, y1 = (min(a.min() for a in ys), max(a.max() for a in ys)) if ys else (0.0, 1.0)
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        pad = 0.05 * (y1 - y0)
        y0, y1 = y0 - pad, y1 + pad

        def px(v):
            return left + (v - x0) / (x1 - x0) * pw

        def py(v):
            return top + ph - (v - y0) / (y1 - y0) * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'font-family="sans-serif" font-size="11">',
            f'<rect width="{self.width}" height="{self.height}" fill="white"/>',
            f'<text x="{self.width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(self.title)}</text>',
            f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        ]
        for k in range(5):
            vx = x0 + (x1 - x0) * k / 4
            vy = y0 + (y1 - y0) * k / 4
            lx = f"1e{vx:.1f}" if self.logx else f"{vx:.3g}"
            ly = f"1e{vy:.1f}" if self.logy else f"{vy:.3g}"
            out.append(f'<line x1="{px(vx):.1f}" y1="{top + ph}" x2="{px(vx):.1f}" y2="{top + ph + 4}" stroke="black"/>')
            out.append(f'<text x="{px(vx):.1f}" y="{top + ph + 16}" text-anchor="middle">{lx}</text>')
            out.append(f'<line x1="{left - 4}" y1="{py(vy):.1f}" x2="{left}" y2="{py(vy):.1f}" stroke="black"/>')
            out.append(f'<text x="{left - 6}" y="{py(vy) + 4:.1f}" text-anchor="end">{ly}</text>')
        out.append(f'<text x="{left + pw / 2:.1f}" y="{self.height - 10}" text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(
            f'<text x="15" y="{top + ph / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 15 {top + ph / 2:.1f})">{escape(self.ylabel)}</text>'
        )
        for i, s in enumerate(self.series):
            color = PALETTE[i % len(PALETTE)]
            X, Y = px(self._tx(s.x, self.logx)), py(self._tx(s.y, self.logy))
            if s.style == "line" and s.x.size > 1:
                pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(X, Y))
                out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            if s.style == "scatter" or s.x.size <= 30:
                out.extend(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2.5" fill="{color}"/>' for a, b in zip(X, Y))
            ly = top + 14 + 16 * i
            out.append(f'<rect x="{left + pw + 10}" y="{ly - 8}" width="10" height="10" fill="{color}"/>')
            out.append(f'<text x="{left + pw + 24}" y="{ly + 1}">{escape(s.label)}</text>')
        out.append("</svg>")
        return "\n".join(out)

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render())
        return path
