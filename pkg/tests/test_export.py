from fractions import Fraction as F

import numpy as np
import pytest

from models.errors import ArcCapExceeded
from models.intervals import IntervalUnion
from models.specification import OrbitSegment, Specification, TraceCertificate
from services.export import (
    arcs_csv,
    certificate_json,
    export_certificate,
    load_certificate,
    props_repr,
    render_fan,
    series_csv,
)
from services.shadowing import NoShadowCertificate, growing_images_series, shadow_feasible, staircase_pseudo_orbit
from services.tracer import trace_specification


def test_props_repr():
    assert props_repr({"stroke_width": 2, "fill": "none"}) == 'stroke-width="2" fill="none"'


def test_two_line_fan(two_lines):
    rendering = render_fan(two_lines, 1)
    svg = rendering.svg()
    assert svg.startswith("<svg ")
    assert 'viewBox="0 0 1000 1000"' in svg
    assert svg.count("<polyline") == 2
    assert 'data-word="1"' in svg and 'data-word="2"' in svg
    assert svg.endswith("</svg>\n")


def test_three_line_fan(three_lines):
    rendering = render_fan(three_lines, 3, style={"stroke": "red"}, size=400)
    svg = rendering.svg()
    assert svg.count("<polyline") == 27
    assert 'stroke="red"' in svg
    assert 'stroke-width="1"' in svg
    assert 'viewBox="0 0 400 400"' in svg


def test_fan_geometry(two_lines):
    rendering = render_fan(two_lines, 2)
    for arc in rendering.arcs:
        assert arc.shape == (4, 2)
        assert np.allclose(arc[0], 0)
        radii = np.hypot(arc[:, 0], arc[:, 1])
        assert radii.max() <= 1000 + 1e-9
    # the first vertex of every arc sits on the diagonal
    first = rendering.arcs[0][1]
    assert first[0] == pytest.approx(first[1])


def test_fan_respects_arc_cap(three_lines):
    with pytest.raises(ArcCapExceeded):
        render_fan(three_lines, 4, cap=27)


def test_no_shadow_certificate_round_trip(three_lines, tmp_path):
    cert = shadow_feasible(three_lines, staircase_pseudo_orbit(4), F(1, 16), horizon=3, depth=6).certificate
    path = tmp_path / "no_shadow.json"
    text = export_certificate(cert, path)
    assert path.read_text() == text
    assert text.endswith("\n")
    loaded = load_certificate(text)
    assert isinstance(loaded, NoShadowCertificate)
    assert loaded == cert
    assert certificate_json(loaded) == text


def test_trace_certificate_round_trip(three_lines):
    spec = Specification.of([OrbitSegment.make(4, [F(1, 6), F(1, 2), F(1, 4)])])
    _, cert = trace_specification(three_lines, spec, F(1, 3))
    text = export_certificate(cert)
    loaded = load_certificate(text, three_lines)
    assert isinstance(loaded, TraceCertificate)
    assert loaded.point == cert.point
    assert certificate_json(loaded) == text
    with pytest.raises(ValueError):
        load_certificate(text)


def test_series_csv(two_lines):
    series = growing_images_series(two_lines, IntervalUnion.interval(F(5, 6), 1), 2, window=1)
    lines = series_csv(series, digits=4).splitlines()
    assert lines[0] == "n,num,den,decimal_4"
    assert lines[1] == "1,1,2,0.5000"
    assert len(lines) == 3


def test_arcs_csv(two_lines):
    lines = arcs_csv(two_lines, 1).splitlines()
    assert lines == ["word,maxima", "1,1 1/2", "2,1/3 1"]
