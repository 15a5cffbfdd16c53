"""Deterministic SVG rendering of reduced unit shapes against the arc of psi."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import mpmath

from .errors import ConfigurationError, ParseError
from .hypgeo import psi_constants


@dataclass
class PlotSpec:
    width: int = 720
    height: int = 540
    x_range: tuple = (-0.6, 0.6)
    y_range: tuple = (0.8, 1.5)
    arc_samples: int = 200
    point_radius: float = 3.0
    out: str = "shapes.svg"

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ConfigurationError("plot width and height must be positive")
        if not self.x_range[0] < self.x_range[1] or not self.y_range[0] < self.y_range[1]:
            raise ConfigurationError("plot ranges must be nonempty")
        if self.arc_samples < 2:
            raise ConfigurationError("arc_samples must be at least 2")


def read_points(path):
    """``(label, x, y)`` triples from a verify CSV; rows without coordinates are skipped."""
    path = Path(path)
    points = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return points
        if "x" not in reader.fieldnames or "y" not in reader.fieldnames:
            raise ParseError(f"{path}: header lacks x and y columns")
        for row in reader:
            line = reader.line_num
            x, y = (row.get("x") or "").strip(), (row.get("y") or "").strip()
            if not x and not y:
                continue
            try:
                xf, yf = float(x), float(y)
            except ValueError:
                raise ParseError(f"{path}: line {line}: cannot read point ({x!r}, {y!r})") from None
            if not yf > 0:
                raise ParseError(f"{path}: line {line}: y = {yf} is not in the upper half plane")
            points.append((row.get("label", ""), xf, yf))
    return points


class _Frame:
    def __init__(self, spec: PlotSpec, margin=40):
        self.spec, self.m = spec, margin

    def __call__(self, x, y):
        s = self.spec
        (x0, x1), (y0, y1) = s.x_range, s.y_range
        px = self.m + (x - x0) / (x1 - x0) * (s.width - 2 * self.m)
        py = s.height - self.m - (y - y0) / (y1 - y0) * (s.height - 2 * self.m)
        return f"{px:.3f},{py:.3f}"


def _polyline(frame, pts, cls):
    return f'<polyline class="{cls}" fill="none" points="{" ".join(frame(x, y) for x, y in pts)}"/>'


def arc_points(n, mirror=False):
    """Points of psi from (1/2, sqrt3/2) to (-1/2, 5/(2 sqrt3)), evenly spaced in angle."""
    psi = psi_constants(64)
    cx, cy, R = float(psi.cx), float(psi.cy), float(psi.R)
    (sx, sy), (ex, ey) = [(float(a), float(b)) for a, b in (psi.arc_start, psi.arc_end)]
    a0 = float(mpmath.atan2(sy - cy, sx - cx))
    a1 = float(mpmath.atan2(ey - cy, ex - cx))
    out = []
    for i in range(n):
        a = a0 + (a1 - a0) * i / (n - 1)
        x, y = cx + R * float(mpmath.cos(a)), cy + R * float(mpmath.sin(a))
        out.append((-x if mirror else x, y))
    return out


def render_svg(points, spec: PlotSpec) -> str:
    frame = _Frame(spec)
    top = spec.y_range[1]
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        "<style>.fd{stroke:#888;stroke-width:1}.psi{stroke:#c0392b;stroke-width:1.5}"
        ".pt{fill:#1f4e99}</style>",
    ]
    # fundamental domain: two vertical sides and the unit circle between them
    y_corner = 3 ** 0.5 / 2
    lines.append(_polyline(frame, [(-0.5, top), (-0.5, y_corner)], "fd"))
    lines.append(_polyline(frame, [(0.5, top), (0.5, y_corner)], "fd"))
    n = max(spec.arc_samples, 2)
    circle = [(float(mpmath.cos(t)), float(mpmath.sin(t)))
              for t in (mpmath.pi / 3 + mpmath.pi / 3 * i / (n - 1) for i in range(n))]
    lines.append(_polyline(frame, circle, "fd"))
    lines.append(_polyline(frame, arc_points(spec.arc_samples), "psi"))
    lines.append(_polyline(frame, arc_points(spec.arc_samples, mirror=True), "psi"))
    for label, x, y in points:
        px, py = frame(x, y).split(",")
        lines.append(f'<circle class="pt" cx="{px}" cy="{py}" r="{spec.point_radius:g}">'
                     f"<title>{_escape(label)}</title></circle>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(s):
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg(points, spec: PlotSpec) -> Path:
    out = Path(spec.out)
    out.write_text(render_svg(points, spec), encoding="utf-8")
    return out
