"""Step-curve figures as standalone SVG."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from collections.abc import Sequence

from .curves import StepCurve
from .errors import DataError

WIDTH = 800
HEIGHT = 600
LEFT, RIGHT, TOP, BOTTOM = 80, 630, 60, 530
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
DASHES = ("", "8 4", "2 3", "10 3 2 3")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_step(span: float, target: int = 8) -> float:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


class _Axes:
    def __init__(self, curves: Sequence[StepCurve]):
        times = [t for c in curves for t in c.jump_times]
        lo = min([0.0, *times])
        hi = max([lo + 1.0, *times])
        self.lo = lo
        self.hi = hi + 0.05 * (hi - lo)

    def x(self, t: float) -> float:
        return LEFT + (t - self.lo) / (self.hi - self.lo) * (RIGHT - LEFT)

    @staticmethod
    def y(p: float) -> float:
        return BOTTOM - p * (BOTTOM - TOP)


def step_path(curve: StepCurve, axes: _Axes) -> str:
    """Post-step path: flat from each jump to the next, vertical drop at a jump."""
    parts = [f"M{_fmt(axes.x(axes.lo))},{_fmt(axes.y(1.0))}"]
    for t, s in zip(curve.jump_times, curve.survival):
        parts.append(f"H{_fmt(axes.x(t))}")
        parts.append(f"V{_fmt(axes.y(s))}")
    parts.append(f"H{_fmt(axes.x(axes.hi))}")
    return " ".join(parts)


def render_step_svg(
    curves: Sequence[tuple[str, StepCurve]],
    title: str = "",
    xlabel: str = "Score",
    ylabel: str = "Proportion",
    width: int = WIDTH,
    height: int = HEIGHT,
) -> str:
    """Render labeled step curves; the drawing uses a fixed 800x600 viewBox."""
    if not curves:
        raise DataError("nothing to plot")
    for label, c in curves:
        if len(c) == 0:
            raise DataError(f"empty curve {label}")
    axes = _Axes([c for _, c in curves])

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "version": "1.1",
            "width": str(width),
            "height": str(height),
            "viewBox": f"0 0 {WIDTH} {HEIGHT}",
            "font-family": "sans-serif",
            "font-size": "14",
        },
    )
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": str(WIDTH), "height": str(HEIGHT), "fill": "white"})
    if title:
        t = ET.SubElement(svg, "text", {"x": str(WIDTH // 2), "y": "32", "text-anchor": "middle", "font-size": "18"})
        t.text = title

    frame = ET.SubElement(svg, "g", {"class": "axes", "stroke": "black", "fill": "none"})
    ET.SubElement(frame, "rect", {"x": str(LEFT), "y": str(TOP), "width": str(RIGHT - LEFT), "height": str(BOTTOM - TOP)})

    ticks = ET.SubElement(svg, "g", {"class": "ticks", "font-size": "12"})
    for i in range(5):
        p = i / 4
        y = _fmt(axes.y(p))
        ET.SubElement(ticks, "line", {"x1": str(LEFT - 5), "y1": y, "x2": str(LEFT), "y2": y, "stroke": "black"})
        lab = ET.SubElement(ticks, "text", {"x": str(LEFT - 8), "y": y, "text-anchor": "end", "dominant-baseline": "middle"})
        lab.text = f"{p:g}"
    step = _nice_step(axes.hi - axes.lo)
    k = math.ceil(axes.lo / step - 1e-9)
    while k * step <= axes.hi + 1e-9:
        v = k * step
        x = _fmt(axes.x(v))
        ET.SubElement(ticks, "line", {"x1": x, "y1": str(BOTTOM), "x2": x, "y2": str(BOTTOM + 5), "stroke": "black"})
        lab = ET.SubElement(ticks, "text", {"x": x, "y": str(BOTTOM + 20), "text-anchor": "middle"})
        lab.text = f"{round(v, 10):g}"
        k += 1

    xl = ET.SubElement(svg, "text", {"x": _fmt((LEFT + RIGHT) / 2), "y": str(HEIGHT - 20), "text-anchor": "middle"})
    xl.text = xlabel
    cy = _fmt((TOP + BOTTOM) / 2)
    yl = ET.SubElement(svg, "text", {"x": "24", "y": cy, "text-anchor": "middle", "transform": f"rotate(-90 24 {cy})"})
    yl.text = ylabel

    lines = ET.SubElement(svg, "g", {"class": "curves", "fill": "none", "stroke-width": "2"})
    legend = ET.SubElement(svg, "g", {"class": "legend", "font-size": "13"})
    for i, (label, curve) in enumerate(curves):
        style = {"stroke": PALETTE[i % len(PALETTE)]}
        dash = DASHES[(i // len(PALETTE)) % len(DASHES)]
        if dash:
            style["stroke-dasharray"] = dash
        ET.SubElement(lines, "path", {"class": "step", "data-label": str(label), "d": step_path(curve, axes), **style})
        ly = TOP + 10 + 22 * i
        entry = ET.SubElement(legend, "g", {"class": "legend-entry"})
        ET.SubElement(entry, "line", {"x1": str(RIGHT + 15), "y1": str(ly), "x2": str(RIGHT + 45), "y2": str(ly), "stroke-width": "2", **style})
        txt = ET.SubElement(entry, "text", {"x": str(RIGHT + 52), "y": str(ly), "dominant-baseline": "middle"})
        txt.text = str(label)

    body = ET.tostring(svg, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"
