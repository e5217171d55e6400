import xml.etree.ElementTree as ET

import numpy as np

from distspec.plots import line_figure
from distspec.svg import line_chart

NS = "{http://www.w3.org/2000/svg}"


def test_chart_is_well_formed_svg():
    svg = line_chart([("a", [0, 1, 2], [0, 1, 4]), ("b", [0, 2], [1, 1])], title="t & u", xlabel="x", ylabel="y",
                     markers=[1.0])
    root = ET.fromstring(svg.encode())
    assert root.tag == NS + "svg" and root.get("version") == "1.1"
    assert len(root.findall(NS + "polyline")) == 2
    dashed = [e for e in root.findall(NS + "line") if e.get("stroke-dasharray")]
    assert len(dashed) == 1


def test_chart_skips_bad_points_and_is_deterministic():
    series = [("s", [1, 10, 100, 1000], [1.0, np.nan, 0.0, 0.1])]
    a = line_chart(series, logx=True, logy=True)
    assert a == line_chart(series, logx=True, logy=True)
    pts = ET.fromstring(a.encode()).find(NS + "polyline").get("points").split()
    assert len(pts) == 2


def test_empty_series_still_renders():
    ET.fromstring(line_chart([("none", [], [])]).encode())


def test_png_figure(tmp_path):
    path = line_figure(str(tmp_path / "f.png"), [("a", [0, 1], [1, 2])], title="x")
    data = open(path, "rb").read()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
