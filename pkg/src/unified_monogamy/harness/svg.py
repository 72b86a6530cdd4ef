"""Tiny self-contained SVG line-chart writer.

Only what the figures need: one rectangular plot area, linear axes with
ticks, a legend, and one ``<polyline>`` per series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

DASHES = {
    "solid": None,
    "dashed": "8,5",
    "dotdash": "2,4,8,4",
    "dotted": "2,4",
}
COLORS = ("#1f4e9c", "#c0392b", "#2e8b57", "#7d3c98", "#b9770e")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    x = start
    while x <= hi + 1e-9 * step:
        ticks.append(round(x, 12))
        x += step
    return ticks


@dataclass
class Series:
    label: str
    xs: list[float]
    ys: list[float]
    style: str = "solid"
    color: str = ""


@dataclass
class LineChart:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    width: int = 640
    height: int = 440
    margin: tuple[int, int, int, int] = (40, 30, 60, 80)  # top, right, bottom, left
    series: list[Series] = field(default_factory=list)

    def add(self, label: str, xs, ys, style: str = "solid") -> None:
        if style not in DASHES:
            raise ValueError(f"unknown line style {style!r}")
        xs, ys = [float(x) for x in xs], [float(y) for y in ys]
        if len(xs) != len(ys) or not xs:
            raise ValueError("series needs matching, nonempty x and y data")
        color = COLORS[len(self.series) % len(COLORS)]
        self.series.append(Series(label, xs, ys, style, color))

    def _bounds(self):
        xs = [x for s in self.series for x in s.xs]
        ys = [y for s in self.series for y in s.ys]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x1 == x0:
            x1 = x0 + 1.0
        pad = 0.05 * (y1 - y0 or 1.0)
        return x0, x1, y0 - pad, y1 + pad

    def render(self) -> str:
        if not self.series:
            raise ValueError("chart has no series")
        top, right, bottom, left = self.margin
        pw = self.width - left - right
        ph = self.height - top - bottom
        x0, x1, y0, y1 = self._bounds()

        def sx(x):
            return left + (x - x0) / (x1 - x0) * pw

        def sy(y):
            return top + (1 - (y - y0) / (y1 - y0)) * ph

        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="white"/>',
            f'<g font-family="sans-serif" font-size="12" fill="black">',
        ]
        if self.title:
            out.append(f'<text x="{self.width / 2:.1f}" y="{top / 2 + 4:.1f}" text-anchor="middle" '
                       f'font-size="14">{escape(self.title)}</text>')
        # axes
        out.append(f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>')
        out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>')
        for tx in nice_ticks(x0, x1):
            if x0 - 1e-12 <= tx <= x1 + 1e-12:
                px = sx(tx)
                out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
                out.append(f'<text x="{px:.2f}" y="{top + ph + 18}" text-anchor="middle">{tx:g}</text>')
        for ty in nice_ticks(y0, y1):
            if y0 <= ty <= y1:
                py = sy(ty)
                out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
                out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end">{ty:g}</text>')
        if self.xlabel:
            out.append(f'<text x="{left + pw / 2:.1f}" y="{self.height - 15}" text-anchor="middle">'
                       f'{escape(self.xlabel)}</text>')
        if self.ylabel:
            cy = top + ph / 2
            out.append(f'<text x="20" y="{cy:.1f}" text-anchor="middle" '
                       f'transform="rotate(-90 20 {cy:.1f})">{escape(self.ylabel)}</text>')
        out.append('</g>')

        for s in self.series:
            pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(s.xs, s.ys))
            dash = DASHES[s.style]
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(f'<polyline fill="none" stroke="{s.color}" stroke-width="2"{dash_attr} '
                       f'points="{pts}"><title>{escape(s.label)}</title></polyline>')

        # legend samples are <line>s so every series owns exactly one polyline
        lx, ly = left + pw - 170, top + 12
        out.append('<g font-family="sans-serif" font-size="12">')
        for i, s in enumerate(self.series):
            yy = ly + 18 * i
            dash = DASHES[s.style]
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(f'<line x1="{lx}" y1="{yy}" x2="{lx + 30}" y2="{yy}" stroke="{s.color}" '
                       f'stroke-width="2"{dash_attr}/>')
            out.append(f'<text x="{lx + 38}" y="{yy + 4}">{escape(s.label)}</text>')
        out.append('</g>')
        out.append('</svg>')
        return "\n".join(out) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())
