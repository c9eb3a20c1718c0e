"""
Artifact renderers: SVG fan approximations, CSV series and JSON certificates
"""
import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from models.rational import decimal_string, format_rational
from models.relation import SlopeSet
from models.shift_space import DEFAULT_ARC_CAP, SlopeWord, enumerate_arcs
from models.specification import TraceCertificate
from services.shadowing import NoShadowCertificate, SeriesResult

logger = logging.getLogger(__name__)

ns_svg = 'http://www.w3.org/2000/svg'

DEFAULT_STYLE = {"stroke": "black", "stroke_width": 1, "fill": "none"}

Certificate = Union[TraceCertificate, NoShadowCertificate]


def props_repr(d: Dict) -> str:
    return ' '.join(f'{k.replace("_", "-")}="{v}"' for k, v in d.items())


def _prefix_rank(letters: Tuple[int, ...], M: int) -> int:
    rank = 0
    for letter in letters:
        rank = rank * M + (letter - 1)
    return rank


@dataclass
class FanRendering:
    """Arcs as polylines in viewport coordinates, top of the fan at (0, 0)"""
    arcs: List[np.ndarray]
    words: List[SlopeWord]
    size: int = 1000
    style: Dict = field(default_factory=lambda: dict(DEFAULT_STYLE))

    def svg(self) -> str:
        head = dict(xmlns=ns_svg, version="1.1", width=self.size, height=self.size,
                    viewBox=f"0 0 {self.size} {self.size}")
        lines = [f'<svg {props_repr(head)}>']
        for word, arc in zip(self.words, self.arcs):
            points = " ".join(f"{x:.3f},{y:.3f}" for x, y in arc)
            attrs = {"points": points, **self.style}
            lines.append(f'  <polyline data-word="{"".join(map(str, word.letters))}" {props_repr(attrs)}/>')
        lines.append('</svg>')
        return "\n".join(lines) + "\n"


def render_fan(omega: SlopeSet, depth: int, style: Optional[Dict] = None, size: int = 1000,
               cap: int = DEFAULT_ARC_CAP) -> FanRendering:
    """
    Project every depth-letter arc into the plane

    Vertex n of an arc sits at radius equal to the mean of its first n coordinate
    maxima and at an angle fixed by the rank of its length n-1 word prefix.
    """
    arcs = enumerate_arcs(omega, depth, cap)
    M = omega.M
    polylines = []
    for word, maxima in arcs:
        values = np.array([float(m) for m in maxima])
        radii = np.concatenate([[0.0], np.cumsum(values) / np.arange(1, len(values) + 1)])
        angles = [np.pi / 4]
        for n in range(1, len(values)):
            rank = _prefix_rank(word.letters[:n], M)
            angles.append((np.pi / 2) * (rank + 1) / (M ** n + 1))
        angles = np.array([angles[0]] + angles)
        xy = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1) * size
        polylines.append(xy)
    logger.info(f"Rendered {len(polylines)} arcs of {omega} at depth {depth}")
    return FanRendering(polylines, [word for word, _ in arcs], size, {**DEFAULT_STYLE, **(style or {})})


def certificate_json(cert: Certificate) -> str:
    return json.dumps(cert.to_json(), sort_keys=True, indent=2) + "\n"


def export_certificate(cert: Certificate, path: Optional[Union[str, Path]] = None) -> str:
    """Serialise a certificate deterministically, writing it to path when given"""
    text = certificate_json(cert)
    if path is not None:
        Path(path).write_text(text)
        logger.info(f"Wrote {cert.to_json()['kind']} certificate to {path}")
    return text


def load_certificate(text: str, omega: Optional[SlopeSet] = None) -> Certificate:
    data = json.loads(text)
    if data.get("kind") == "trace":
        if omega is None:
            raise ValueError("Trace certificates need the slope set of their point")
        return TraceCertificate.from_json(omega, data)
    return NoShadowCertificate.from_json(data)


def _write_rows(header: Sequence[str], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def series_csv(series: SeriesResult, digits: int = 12) -> str:
    """n, exact numerator and denominator, and a decimal annotation tagged with its precision"""
    rows = [
        (n, d.numerator, d.denominator, decimal_string(d, digits))
        for n, d in series.values
    ]
    return _write_rows(("n", "num", "den", f"decimal_{digits}"), rows)


def arcs_csv(omega: SlopeSet, depth: int, cap: int = DEFAULT_ARC_CAP) -> str:
    rows = [
        (" ".join(map(str, word.letters)), " ".join(format_rational(m) for m in maxima))
        for word, maxima in enumerate_arcs(omega, depth, cap)
    ]
    return _write_rows(("word", "maxima"), rows)
