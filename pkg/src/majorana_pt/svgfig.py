"""Minimal SVG stem plots for amplitude profiles, no plotting dependency.

One panel per chain length, stacked vertically: vertical stems at the site
indices with circles at the amplitude values, a frame, and sparse tick
labels.  String assembly only; deterministic output.
"""

from __future__ import annotations

__all__ = ["stem_panels"]

_PANEL_W = 560.0
_PANEL_H = 150.0
_MARGIN_L = 52.0
_MARGIN_R = 16.0
_MARGIN_T = 30.0
_GAP = 26.0
_STYLE = 'stroke="#1f4e8c" stroke-width="1.2"'


def _panel(values, label: str, x_max: int, y_max: float, top: float) -> list[str]:
    width = _PANEL_W - _MARGIN_L - _MARGIN_R
    height = _PANEL_H - 36.0
    x0, y0 = _MARGIN_L, top + 8.0

    def sx(j: float) -> float:
        return x0 + (j - 0.5) / x_max * width

    def sy(p: float) -> float:
        return y0 + height * (1.0 - p / y_max)

    parts = [
        f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{width:.2f}" '
        f'height="{height:.2f}" fill="none" stroke="#444" stroke-width="0.8"/>',
        f'<text x="{x0 + 6:.2f}" y="{y0 + 14:.2f}" font-size="12" '
        f'font-family="monospace" fill="#222">{label}</text>',
    ]
    base = sy(0.0)
    for j, p in enumerate(values, start=1):
        x = sx(j)
        parts.append(
            f'<line x1="{x:.2f}" y1="{base:.2f}" x2="{x:.2f}" '
            f'y2="{sy(p):.2f}" {_STYLE}/>'
        )
        parts.append(
            f'<circle cx="{x:.2f}" cy="{sy(p):.2f}" r="2.4" fill="#1f4e8c"/>'
        )
    for j in range(0, x_max + 1, max(2, x_max // 6)):
        if j == 0:
            continue
        parts.append(
            f'<text x="{sx(j):.2f}" y="{y0 + height + 14:.2f}" font-size="10" '
            f'font-family="monospace" text-anchor="middle" fill="#444">{j}</text>'
        )
    for frac in (0.0, 0.5, 1.0):
        parts.append(
            f'<text x="{x0 - 6:.2f}" y="{sy(frac * y_max) + 3.5:.2f}" font-size="10" '
            f'font-family="monospace" text-anchor="end" fill="#444">'
            f"{frac * y_max:.2f}</text>"
        )
    return parts


def stem_panels(panels, title: str = "", comment: str = "") -> str:
    """Stacked stem plots; ``panels`` is a list of (label, values) pairs.

    All panels share the x range of the widest one, so nested profiles line
    up site by site.  Returns the SVG document as a string.
    """
    if not panels:
        raise ValueError("no panels to draw")
    x_max = max(len(values) for _, values in panels)
    y_max = max(max(values) for _, values in panels)
    y_max = y_max if y_max > 0 else 1.0
    total_h = _MARGIN_T + len(panels) * (_PANEL_H + _GAP)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_PANEL_W:.0f}" '
        f'height="{total_h:.0f}" viewBox="0 0 {_PANEL_W:.0f} {total_h:.0f}">',
    ]
    if comment:
        parts.append(f"<!-- {comment} -->")
    parts.append(f'<rect width="100%" height="100%" fill="#ffffff"/>')
    if title:
        parts.append(
            f'<text x="{_PANEL_W / 2:.2f}" y="20" font-size="13" '
            f'font-family="monospace" text-anchor="middle" fill="#111">{title}</text>'
        )
    top = _MARGIN_T
    for label, values in panels:
        parts.extend(_panel(list(values), label, x_max, y_max * 1.05, top))
        top += _PANEL_H + _GAP
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
