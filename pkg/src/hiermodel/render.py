"""SVG brick diagrams.

Levels run upward.  Finite breakpoints are spaced evenly by rank (R-hat is
ordered, not metric) and the two ideal levels sit at fixed margins.  Each
annulus component is one ``<line>`` in the column of its curve; each final
brick is one ``<rect>`` spanning the columns of its frontier curves.  The frame
and tick marks are ``<path>`` elements so the element counts stay meaningful.
"""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .extreal import NEG_INF, POS_INF, format_ext, is_finite
from .hierarchy import Hierarchy, annulus_components

COL = 60
ROW = 40
MARGIN = 50
LEFT = 70


def _level_map(levels):
    pts = sorted(set(levels))
    n = len(pts)
    height = MARGIN * 2 + ROW * max(n - 1, 1) + 2 * MARGIN

    def y(t):
        if t == POS_INF:
            return MARGIN
        if t == NEG_INF:
            return height - MARGIN
        if not pts:
            return height / 2
        if t <= pts[0]:
            r = Fraction(0)
        elif t >= pts[-1]:
            r = Fraction(n - 1)
        else:
            i = max(j for j, p in enumerate(pts) if p <= t)
            r = i + (Fraction(t) - pts[i]) / (pts[i + 1] - pts[i])
        return float(height - 2 * MARGIN - r * ROW)

    return y, height


def render_svg(H: Hierarchy) -> str:
    sys = H.system
    comps = annulus_components(H.annuli)
    order = []
    for c, _ in comps:
        if c not in order:
            order.append(c)
    col = {c: LEFT + COL * (i + 1) for i, c in enumerate(order)}
    width = LEFT + COL * (len(order) + 1) + MARGIN
    levels = [x for a in H.annuli for x in (a.lo, a.hi) if is_finite(x)]
    y, height = _level_map(levels)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    x0, x1 = LEFT, width - MARGIN
    out.append(f'<path d="M{x0} {MARGIN} H{x1} M{x0} {height - MARGIN} H{x1}" stroke="#999" '
               f'stroke-dasharray="4 3" fill="none"/>')
    out.append(f'<text x="4" y="{MARGIN + 4}" font-size="11">+inf</text>')
    out.append(f'<text x="4" y="{height - MARGIN + 4}" font-size="11">-inf</text>')
    for t in sorted(set(levels)):
        yy = y(t)
        out.append(f'<path d="M{x0 - 6} {yy:.2f} H{x0}" stroke="#666"/>')
        out.append(f'<text x="4" y="{yy + 4:.2f}" font-size="11">{escape(format_ext(t))}</text>')
    for B in H.final_bricks:
        xs = [col[c] for c in B.base.frontier if c in col]
        if xs:
            bx0, bx1 = min(xs) - COL * 0.4, max(xs) + COL * 0.4
        else:
            bx0, bx1 = x0 + 6, x1 - 6
        top, bot = y(B.hi), y(B.lo)
        title = escape(f"{B.base} x {B.interval}")
        out.append(f'<rect x="{bx0:.2f}" y="{top:.2f}" width="{bx1 - bx0:.2f}" height="{bot - top:.2f}" '
                   f'fill="#4a7bd0" fill-opacity="0.12" stroke="#4a7bd0"><title>{title}</title></rect>')
    for c, iv in comps:
        x = col[c]
        out.append(f'<line x1="{x}" y1="{y(iv.lo):.2f}" x2="{x}" y2="{y(iv.hi):.2f}" stroke="#c0392b" '
                   f'stroke-width="3"><title>{escape(sys.format_curve(c))} x {escape(str(iv))}</title></line>')
        out.append(f'<text x="{x - 8}" y="{height - 8}" font-size="11">{escape(sys.format_curve(c))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
