"""Minimal standalone SVG line charts (curves plus optional shaded bands)."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2")
WIDTH, HEIGHT, MARGIN = 640, 420, 56


def _fmt(v):
    return f"{v:.2f}"


def line_chart(path, series, *, title="", xlabel="", ylabel="", bands=()):
    """``series`` is a list of ``(label, x, y)``; ``bands`` of ``(label, x, lo, hi)``."""
    xs = [np.asarray(x, float) for _, x, _ in series] + [np.asarray(x, float) for _, x, _, _ in bands]
    ys = [np.asarray(y, float) for _, _, y in series]
    ys += [np.asarray(v, float) for _, _, lo, hi in bands for v in (lo, hi)]
    xmin, xmax = min(x.min() for x in xs), max(x.max() for x in xs)
    ymin, ymax = min(y.min() for y in ys), max(y.max() for y in ys)
    if xmax == xmin:
        xmax = xmin + 1
    if ymax == ymin:
        ymax = ymin + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (x - xmin) / (xmax - xmin) * pw

    def py(y):
        return HEIGHT - MARGIN - (y - ymin) / (ymax - ymin) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 14}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" transform="rotate(-90 16 {HEIGHT / 2})">'
        f"{escape(ylabel)}</text>",
    ]
    for v in np.linspace(xmin, xmax, 5):
        out.append(f'<text x="{_fmt(px(v))}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">{v:.3g}</text>')
    for v in np.linspace(ymin, ymax, 5):
        out.append(f'<text x="{MARGIN - 6}" y="{_fmt(py(v) + 4)}" text-anchor="end">{v:.3g}</text>')
    for i, (_, x, lo, hi) in enumerate(bands):
        x = np.asarray(x, float)
        pts = [f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, lo)]
        pts += [f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x[::-1], np.asarray(hi)[::-1])]
        out.append(f'<polygon points="{" ".join(pts)}" fill="{PALETTE[i % len(PALETTE)]}" '
                   f'fill-opacity="0.2" stroke="none"/>')
    for i, (label, x, y) in enumerate(series):
        colour = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, y))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
        ly = MARGIN + 14 + 16 * i
        out.append(f'<line x1="{WIDTH - MARGIN - 130}" y1="{ly - 4}" x2="{WIDTH - MARGIN - 110}" '
                   f'y2="{ly - 4}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 104}" y="{ly}">{escape(str(label))}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
