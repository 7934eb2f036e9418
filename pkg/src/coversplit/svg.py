"""Deterministic SVG drawings of realizations and extended point sets."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import quoteattr

from .geometry import Rect
from .hypergraph import Color
from .realization import ExtendedPointSet, Realization

STROKE = {Color.RED: "#c0392b", Color.BLUE: "#2c3e8f", None: "#555555"}


def _num(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(obj, scale=Fraction(200), dot=2.0) -> str:
    """SVG text; disks are circles, points dots, eps-boxes dashed rectangles."""
    if isinstance(obj, ExtendedPointSet):
        r, extra = obj.base, obj.extra_points
    elif isinstance(obj, Realization):
        r, extra = obj, []
    else:
        raise TypeError("expected a Realization or ExtendedPointSet")
    scale = Fraction(scale)
    if scale <= 0:
        raise ValueError("scale must be positive")
    s = float(scale)
    pts = list(r.points) + list(extra)
    box = Rect.bounding(pts + [d.center for d in r.disks]).expanded(1)
    x0, y1 = float(box.x0), float(box.y1)
    w, h = float(box.x1 - box.x0) * s, float(box.y1 - box.y0) * s

    def X(x):
        return _num((float(x) - x0) * s)

    def Y(y):
        return _num((y1 - float(y)) * s)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(w)}" height="{_num(h)}" '
        f'viewBox="0 0 {_num(w)} {_num(h)}">',
        f"<title>{'extended ' if extra else ''}realization k={r.k} l={r.l} eps={r.eps}</title>",
    ]
    e, e2 = r.eps, r.eps * r.eps
    o = r.origin
    for cy in (o.y, o.y + 1, o.y - 1):
        out.append(
            f'<rect class="eps-box" x="{X(o.x - e)}" y="{Y(cy + e2)}" width="{_num(float(2 * e) * s)}" '
            f'height="{_num(float(2 * e2) * s)}" fill="none" stroke="#888888" stroke-dasharray="4 2"/>'
        )
    for d in r.disks:
        out.append(
            f'<circle class="disk" data-id="{d.id}" cx="{X(d.center.x)}" cy="{Y(d.center.y)}" r="{_num(s)}" '
            f'fill="none" stroke={quoteattr(STROKE[d.color])}/>'
        )
    for i, p in enumerate(r.points):
        out.append(f'<circle class="point" data-id="{i}" cx="{X(p.x)}" cy="{Y(p.y)}" r="{_num(dot)}" fill="#000000"/>')
    for p in extra:
        out.append(f'<circle class="grid" cx="{X(p.x)}" cy="{Y(p.y)}" r="{_num(dot / 2)}" fill="#999999"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_svg(obj, scale, path) -> None:
    text = render_svg(obj, scale)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
