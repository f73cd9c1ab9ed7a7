"""Standalone SVG rendering of the bandwidth/latency plane (log-log)."""

from __future__ import annotations

import math
from typing import Sequence

from .errors import ParameterError
from .service_plane import ServiceRequirement, classify_service

WIDTH = 800
HEIGHT = 560
MARGIN_LEFT = 90
MARGIN_RIGHT = 40
MARGIN_TOP = 50
MARGIN_BOTTOM = 70

FEASIBLE = "#2ca02c"
INFEASIBLE = "#d62728"
UNCLASSIFIED = "#7f7f7f"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _decades(lo, hi):
    return math.floor(math.log10(lo)), math.ceil(math.log10(hi))


def _rate_label(bps):
    for scale, unit in ((1e9, "Gbit/s"), (1e6, "Mbit/s"), (1e3, "kbit/s")):
        if bps >= scale:
            return f"{bps / scale:g} {unit}"
    return f"{bps:g} bit/s"


def _time_label(s):
    if s >= 1:
        return f"{s:g} s"
    if s >= 1e-3:
        return f"{s * 1e3:g} ms"
    return f"{s * 1e6:g} us"


def emit_plane_svg(catalog: Sequence[ServiceRequirement], path, boundary: Sequence[tuple[float, float]],
                   title: str = "Bandwidth / latency requirements") -> str:
    """Plot the region boundary as a dashed polyline plus one marker per service.

    Markers are green when the service is feasible on ``path``, red when not,
    and grey when ``path`` is None.
    """
    if not boundary:
        raise ParameterError("boundary", boundary, "a non-empty list of (bandwidth, rtt) points")
    xs = [b for b, _ in boundary] + [s.min_bandwidth for s in catalog]
    ys = [t for _, t in boundary] + [s.max_latency for s in catalog]
    x0, x1 = _decades(min(xs), max(xs))
    y0, y1 = _decades(min(ys), max(ys))
    x1 = max(x1, x0 + 1)
    y1 = max(y1, y0 + 1)

    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    def px(x):
        return left + (math.log10(x) - x0) / (x1 - x0) * (right - left)

    def py(y):
        return bottom - (math.log10(y) - y0) / (y1 - y0) * (bottom - top)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-size="18" '
        f'font-family="sans-serif">{_escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        'fill="none" stroke="#000000"/>',
    ]
    for d in range(x0, x1 + 1):
        x = px(10.0 ** d)
        out.append(f'<line x1="{x:.2f}" y1="{top}" x2="{x:.2f}" y2="{bottom}" stroke="#dddddd"/>')
        out.append(f'<text x="{x:.2f}" y="{bottom + 18}" text-anchor="middle" font-size="11" '
                   f'font-family="sans-serif">{_escape(_rate_label(10.0 ** d))}</text>')
    for d in range(y0, y1 + 1):
        y = py(10.0 ** d)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{right}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end" font-size="11" '
                   f'font-family="sans-serif">{_escape(_time_label(10.0 ** d))}</text>')
    out.append(f'<text x="{(left + right) / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" font-size="13" '
               'font-family="sans-serif">bandwidth</text>')
    out.append(f'<text x="20" y="{(top + bottom) / 2:.1f}" text-anchor="middle" font-size="13" '
               f'font-family="sans-serif" transform="rotate(-90 20 {(top + bottom) / 2:.1f})">latency</text>')

    pts = " ".join(f"{px(b):.2f},{py(t):.2f}" for b, t in boundary)
    out.append(f'<polyline class="boundary" points="{pts}" fill="none" stroke="#1f77b4" '
               'stroke-width="2" stroke-dasharray="8 5"/>')

    for svc in catalog:
        if path is None:
            color = UNCLASSIFIED
        else:
            color = FEASIBLE if classify_service(svc, path).feasible else INFEASIBLE
        cx, cy = px(svc.min_bandwidth), py(svc.max_latency)
        out.append(f'<circle class="service" cx="{cx:.2f}" cy="{cy:.2f}" r="6" fill="{color}"/>')
        out.append(f'<text x="{cx + 9:.2f}" y="{cy + 4:.2f}" font-size="12" '
                   f'font-family="sans-serif">{_escape(svc.name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
