"""Static SVG figures written as plain markup for byte-identical output.

Text widths are estimated from a fixed per-character advance, so the layout
never depends on installed fonts.
"""

from __future__ import annotations

from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from knowmap.netlab.export import cluster_color

WIDTH = 720
HEIGHT = 420
CHAR_W = 6.5  # approximate advance of 11px sans-serif
FONT = 'font-family="Helvetica, Arial, sans-serif" font-size="11"'


def _n(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _header(title: str, width: int = WIDTH, height: int = HEIGHT) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width / 2:.0f}" y="22" text-anchor="middle" {FONT} font-size="14">'
        f"{escape(title)}</text>",
    ]


def bar_chart(
    rows: Sequence[tuple[str, float]],
    title: str,
    horizontal: bool = False,
    color: str = "#1f77b4",
) -> str:
    """Vertical bars (e.g. articles per year) or horizontal bars (e.g. top authors)."""
    out = _header(title)
    if not rows:
        out.append(f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT / 2:.0f}" text-anchor="middle" {FONT}>no data</text>')
        return "\n".join(out + ["</svg>"]) + "\n"
    peak = max(v for _, v in rows) or 1
    if horizontal:
        label_w = min(260.0, max(len(label) for label, _ in rows) * CHAR_W + 12)
        left, right, top, bottom = label_w, WIDTH - 60, 40, HEIGHT - 20
        step = (bottom - top) / len(rows)
        bar_h = step * 0.7
        for k, (label, value) in enumerate(rows):
            y = top + k * step
            w = (right - left) * value / peak
            out.append(
                f'<rect x="{_n(left)}" y="{_n(y)}" width="{_n(w)}" height="{_n(bar_h)}" fill="{color}"/>'
            )
            out.append(
                f'<text x="{_n(left - 6)}" y="{_n(y + bar_h * 0.75)}" text-anchor="end" {FONT}>'
                f"{escape(label)}</text>"
            )
            out.append(
                f'<text x="{_n(left + w + 4)}" y="{_n(y + bar_h * 0.75)}" {FONT}>{_n(value)}</text>'
            )
    else:
        left, right, top, bottom = 50, WIDTH - 20, 40, HEIGHT - 50
        step = (right - left) / len(rows)
        bar_w = step * 0.8
        out.append(f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="#333333"/>')
        for k, (label, value) in enumerate(rows):
            x = left + k * step + (step - bar_w) / 2
            h = (bottom - top) * value / peak
            out.append(
                f'<rect x="{_n(x)}" y="{_n(bottom - h)}" width="{_n(bar_w)}" height="{_n(h)}" fill="{color}"/>'
            )
            cx = x + bar_w / 2
            out.append(
                f'<text x="{_n(cx)}" y="{_n(bottom - h - 4)}" text-anchor="middle" {FONT}>{_n(value)}</text>'
            )
            out.append(
                f'<text x="{_n(cx)}" y="{bottom + 14}" text-anchor="end" {FONT} '
                f'transform="rotate(-45 {_n(cx)} {bottom + 14})">{escape(label)}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def scatter_map(
    points: Mapping[str, tuple[float, float]],
    clusters: Mapping[str, int],
    title: str,
    sizes: Mapping[str, int] | None = None,
) -> str:
    """Node labels at their 2D coordinates, coloured by cluster."""
    size = 640
    margin = 60
    out = _header(title, size, size)
    labels = sorted(points)
    if labels:
        xs = [points[k][0] for k in labels]
        ys = [points[k][1] for k in labels]
        span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
        cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
        scale = (size - 2 * margin) / span
        top = max(sizes.values()) if sizes else 1
        for label in labels:
            x = size / 2 + (points[label][0] - cx) * scale
            y = size / 2 - (points[label][1] - cy) * scale
            r = 3 + 7 * ((sizes or {}).get(label, top) / top) ** 0.5
            color = cluster_color(clusters.get(label))
            out.append(
                f'<circle cx="{_n(x)}" cy="{_n(y)}" r="{_n(r)}" fill="{color}" fill-opacity="0.8"/>'
            )
            out.append(f'<text x="{_n(x + r + 2)}" y="{_n(y + 4)}" {FONT}>{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
