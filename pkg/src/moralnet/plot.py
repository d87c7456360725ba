"""Tiny dependency-free SVG charts for the optional figure outputs.

Only two shapes are needed: a bar chart for eigenvalue scree data and a
scatter for biplot points. Output is a deterministic standalone SVG
string.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

_WIDTH = 640
_HEIGHT = 400
_MARGIN = 48


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(title)}</text>',
    ]


def svg_bar_chart(
    labels: Sequence[str], values: Sequence[float], title: str
) -> str:
    """Vertical bars with value labels; y starts at zero."""
    if len(labels) != len(values):
        raise ValueError("labels and values must have equal length")
    if not labels:
        raise ValueError("nothing to draw")
    top = max(max(values), 0.0) or 1.0
    inner_w = _WIDTH - 2 * _MARGIN
    inner_h = _HEIGHT - 2 * _MARGIN
    slot = inner_w / len(labels)
    bar_w = slot * 0.6
    parts = _header(title)
    base_y = _HEIGHT - _MARGIN
    parts.append(
        f'<line x1="{_MARGIN}" y1="{base_y}" x2="{_WIDTH - _MARGIN}" '
        f'y2="{base_y}" stroke="black"/>'
    )
    for i, (label, value) in enumerate(zip(labels, values)):
        h = max(0.0, value) / top * inner_h
        x = _MARGIN + i * slot + (slot - bar_w) / 2
        y = base_y - h
        parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
            f'height="{_fmt(h)}" fill="#4878a8"/>'
        )
        cx = x + bar_w / 2
        parts.append(
            f'<text x="{_fmt(cx)}" y="{base_y + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{escape(label)}</text>'
        )
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(y - 4)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{value:.4f}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def svg_scatter(
    points: Sequence[tuple[float, float]],
    arrows: Sequence[tuple[str, float, float]],
    title: str,
    x_label: str,
    y_label: str,
) -> str:
    """Scatter of projected points plus labelled arrows from the origin."""
    xs = [p[0] for p in points] + [a[1] for a in arrows] + [0.0]
    ys = [p[1] for p in points] + [a[2] for a in arrows] + [0.0]
    span = max(max(abs(v) for v in xs), max(abs(v) for v in ys)) or 1.0
    span *= 1.1
    inner = min(_WIDTH, _HEIGHT) - 2 * _MARGIN
    cx = _WIDTH / 2
    cy = _HEIGHT / 2

    def sx(v: float) -> str:
        return _fmt(cx + v / span * (inner / 2))

    def sy(v: float) -> str:
        return _fmt(cy - v / span * (inner / 2))

    parts = _header(title)
    parts.append(
        f'<line x1="{_MARGIN}" y1="{cy}" x2="{_WIDTH - _MARGIN}" y2="{cy}" '
        'stroke="#cccccc"/>'
    )
    parts.append(
        f'<line x1="{cx}" y1="{_MARGIN}" x2="{cx}" y2="{_HEIGHT - _MARGIN}" '
        'stroke="#cccccc"/>'
    )
    parts.append(
        f'<text x="{_WIDTH - _MARGIN}" y="{cy - 6}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="{cx + 6}" y="{_MARGIN + 4}" font-family="sans-serif" '
        f'font-size="11">{escape(y_label)}</text>'
    )
    for x, y in points:
        parts.append(
            f'<circle cx="{sx(x)}" cy="{sy(y)}" r="2.5" fill="#4878a8" '
            'fill-opacity="0.6"/>'
        )
    for name, x, y in arrows:
        parts.append(
            f'<line x1="{cx}" y1="{cy}" x2="{sx(x)}" y2="{sy(y)}" '
            'stroke="#b04030" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{sx(x)}" y="{sy(y)}" font-family="sans-serif" '
            f'font-size="11" fill="#b04030">{escape(name)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
