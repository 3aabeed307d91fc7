"""SVG rendering of a tour: points, heading ticks, arcs and segments."""
from __future__ import annotations

import math

from .geometry import sample_path
from .tour import Instance, TourConfig, TourEvaluation

# Sample spacing along a curve, in turning radii.
_SPACING = 0.125


def _f(x: float) -> str:
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(instance: Instance, config: TourConfig, evaluation: TourEvaluation,
               size: float = 600.0) -> str:
    """Deterministic SVG text for the tour described by ``evaluation``."""
    xs = [p[0] for p in instance.points]
    ys = [p[1] for p in instance.points]
    pad = 2.0 * instance.rho
    for e in evaluation.edges:
        for c in (e.c1, e.c2):
            xs += [c[0] - instance.rho, c[0] + instance.rho]
            ys += [c[1] - instance.rho, c[1] + instance.rho]
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    k = size / max(x1 - x0, y1 - y0)
    width, height = (x1 - x0) * k, (y1 - y0) * k

    def tx(x, y):
        return _f((x - x0) * k), _f((y1 - y) * k)

    r = instance.rho
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        '<rect width="100%" height="100%" fill="white"/>',
        '<g id="edges" fill="none" stroke="#1f4e9c" stroke-width="1.5">',
    ]
    for i, e in enumerate(evaluation.edges):
        if e.arc1_angle == 0.0 and e.arc2_angle == 0.0:
            (ax, ay), (bx, by) = tx(*e.start.position), tx(*e.end.position)
            lines.append(f'<line class="edge" data-edge="{i}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
            continue
        count = max(8, int(math.ceil(e.total_length / (_SPACING * r))) + 2)
        pts = " ".join(",".join(tx(*p)) for p in sample_path(e, count))
        lines.append(f'<polyline class="edge" data-edge="{i}" data-subtype="{e.subtype}" points="{pts}"/>')
    lines.append("</g>")
    lines.append('<g id="points">')
    tick = 1.5 * r
    for i, ((x, y), h) in enumerate(zip(instance.points, config.angles)):
        cx, cy = tx(x, y)
        hx, hy = tx(x + tick * math.cos(h), y + tick * math.sin(h))
        lines.append(f'<circle class="point" data-point="{i + 1}" cx="{cx}" cy="{cy}" r="4" fill="#c0392b"/>')
        lines.append(f'<line class="heading" x1="{cx}" y1="{cy}" x2="{hx}" y2="{hy}" stroke="#c0392b" stroke-width="1"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
