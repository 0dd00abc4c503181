import re
import xml.etree.ElementTree as ET

import pytest

from ordsurv import DataError, Observation, km_estimate
from ordsurv.plot import BOTTOM, TOP, render_step_svg

NS = {"svg": "http://www.w3.org/2000/svg"}


def paths(svg):
    root = ET.fromstring(svg.split("\n", 1)[1])
    return root, [p.get("d") for p in root.iterfind(".//svg:path", NS)]


def drops(d):
    """Vertical moves (y before, y after) of a path made of M/H/V commands."""
    out = []
    y = None
    for cmd, args in re.findall(r"([MHV])([-\d.,]+)", d):
        if cmd == "M":
            y = float(args.split(",")[1])
        elif cmd == "V":
            out.append((y, float(args)))
            y = float(args)
    return out


def test_single_step():
    root, (d,) = paths(render_step_svg([("one", km_estimate([1]))]))
    assert root.get("viewBox") == "0 0 800 600"
    assert drops(d) == [(TOP, BOTTOM)]
    x_drop = re.findall(r"H([\d.]+) V", d)
    assert len(x_drop) == 1


def test_two_curves_and_legend():
    svg = render_step_svg([("a", km_estimate([1, 2])), ("b", km_estimate([3]))], title="t")
    root, ds = paths(svg)
    assert len(ds) == 2
    legend = root.find(".//svg:g[@class='legend']", NS)
    assert [t.text for t in legend.iterfind(".//svg:text", NS)] == ["a", "b"]
    strokes = {p.get("stroke") for p in root.iterfind(".//svg:path", NS)}
    assert len(strokes) == 2


def test_equal_drops():
    _, (d,) = paths(render_step_svg([("c", km_estimate([1, 2, 3, 4]))]))
    heights = [after - before for before, after in drops(d)]
    assert heights == pytest.approx([0.25 * (BOTTOM - TOP)] * 4, abs=0.01)


def test_deterministic():
    curves = [("x", km_estimate([0, 2, 2, 5]))]
    assert render_step_svg(curves) == render_step_svg(curves)


def test_errors():
    with pytest.raises(DataError, match="nothing to plot"):
        render_step_svg([])
    with pytest.raises(DataError):
        render_step_svg([("censored", km_estimate([Observation(1, False)]))])
