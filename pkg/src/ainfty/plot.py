"""Deterministic SVG rendering of barcodes.

Bars are horizontal segments over an integer index axis, one row per unit of
multiplicity, grouped by degree.  Output depends only on the barcodes, so the
same input always produces the same bytes.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .persist import CLOSED, Barcode

UNIT = 40
ROW = 14
LEFT = 70
TOP = 30
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def barcode_svg(barcodes: Sequence[Barcode], title: str = "") -> str:
    N = max((bc.N for bc in barcodes), default=0)
    rows = []
    for k, bc in enumerate(barcodes):
        label = f"{bc.kind}{'' if bc.degree is None else bc.degree}"
        items = []
        for (b, e), m in bc.intervals.items():
            items.extend([(b, e)] * m)
        rows.append((label, COLORS[k % len(COLORS)], items, bc.flavor, bc.N))
    n_rows = sum(max(len(items), 1) for _, _, items, _, _ in rows)
    width = LEFT + UNIT * (N + 1) + 30
    height = TOP + ROW * n_rows + 10 * len(rows) + 40
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{LEFT}" y="16">{escape(title)}</text>')
    axis_y = height - 30
    out.append(f'<line x1="{LEFT}" y1="{axis_y}" x2="{LEFT + UNIT * (N + 1)}" y2="{axis_y}" stroke="black"/>')
    for i in range(N + 2):
        x = LEFT + UNIT * i
        out.append(f'<line x1="{x}" y1="{axis_y}" x2="{x}" y2="{axis_y + 4}" stroke="black"/>')
        if i <= N:
            out.append(f'<text x="{x}" y="{axis_y + 16}" text-anchor="middle">{i}</text>')
    y = TOP
    for label, color, items, flavor, bN in rows:
        out.append(f'<text x="8" y="{y + ROW - 3}">{escape(label)}</text>')
        if not items:
            y += ROW + 10
            continue
        for b, e in items:
            x0 = LEFT + UNIT * b
            if flavor == CLOSED:
                x1 = LEFT + UNIT * e + UNIT // 2
            else:
                x1 = LEFT + UNIT * (e + 1)
            out.append(f'<rect x="{x0}" y="{y + 2}" width="{max(x1 - x0, 4)}" height="{ROW - 4}" '
                       f'fill="{color}"/>')
            if flavor != CLOSED and e == bN:
                out.append(f'<text x="{x1 + 2}" y="{y + ROW - 3}">&#8594;</text>')
            y += ROW
        y += 10
    out.append("</svg>")
    return "\n".join(out) + "\n"
