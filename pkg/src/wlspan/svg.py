"""Deterministic SVG output for poly-line drawings: one user unit per level."""
from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .drawing import PolylineDrawing

PAD = 1
RADIUS = 0.18


def _num(x) -> str:
    s = f"{float(Fraction(x)):.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def svg_string(d: PolylineDrawing) -> str:
    ys = [y for _, y in d.positions.values()]
    xs = [x for x, _ in d.positions.values()] + [x for e in d.edges for x, _ in e[2]]
    if not ys:
        return ('<svg xmlns="http://www.w3.org/2000/svg" width="1" height="1" '
                'viewBox="0 0 1 1"></svg>\n')
    lo_y, hi_y = min(ys), max(ys)
    lo_x, hi_x = min(xs), max(xs)
    width = hi_x - lo_x + 2 * PAD
    height = hi_y - lo_y + 2 * PAD

    def px(x):
        return _num(Fraction(x) - lo_x + PAD)

    def py(y):
        # level hi_y at the top
        return _num(hi_y - y + PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width * 40)}" '
           f'height="{_num(height * 40)}" viewBox="0 0 {_num(width)} {_num(height)}">']
    out.append('<g class="levels" stroke="#ccc" stroke-width="0.02">')
    for y in range(lo_y, hi_y + 1):
        out.append(f'<line x1="0" y1="{py(y)}" x2="{_num(width)}" y2="{py(y)}"/>')
    out.append("</g>")
    out.append('<g class="edges" fill="none" stroke="#222" stroke-width="0.04">')
    for u, v, bends in sorted(d.edges, key=lambda e: (e[0], e[1])):
        pts = [d.positions[u], *bends, d.positions[v]]
        path = " ".join(f"{px(x)},{py(y)}" for x, y in pts)
        out.append(f'<polyline points="{path}"/>')
    out.append("</g>")
    out.append('<g class="vertices" font-size="0.25" text-anchor="middle">')
    for v in sorted(d.positions):
        x, y = d.positions[v]
        out.append(f'<circle cx="{px(x)}" cy="{py(y)}" r="{RADIUS}" fill="#fff" '
                   f'stroke="#222" stroke-width="0.03"/>')
        out.append(f'<text x="{px(x)}" y="{_num(hi_y - y + PAD + 0.08)}">{escape(str(v))}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(d: PolylineDrawing, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg_string(d))
