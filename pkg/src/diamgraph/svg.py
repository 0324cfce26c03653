"""Orthographic SVG picture of a spherical drawing."""

from __future__ import annotations

import numpy as np

from .geometry import normalize, slerp, tangent_frame

__all__ = ["render_svg", "DEFAULT_VIEW", "ARC_SAMPLES"]

DEFAULT_VIEW = (0.4, -0.6, 0.7)
ARC_SAMPLES = 64

_STYLE = """
.sphere{fill:#f7f7f7;stroke:#444;stroke-width:1}
.edge path{fill:none;stroke:#333;stroke-width:1.2}
.edge path.back{stroke:#999;stroke-dasharray:4 3}
.vertex{stroke:#000;stroke-width:0.8}
.vertex.red{fill:#d62728}
.vertex.blue{fill:#1f77b4}
.vertex.back{fill-opacity:0.35;stroke-dasharray:2 2}
""".strip()


def _runs(samples: np.ndarray, front: np.ndarray):
    """Split a polyline into maximal front/back pieces sharing their cut points."""
    start = 0
    for i in range(1, len(samples) + 1):
        if i == len(samples) or front[i] != front[start]:
            stop = min(i + 1, len(samples))
            yield bool(front[start]), samples[start:stop]
            start = i


def render_svg(dr, view=DEFAULT_VIEW, size: int = 600) -> str:
    """Project along ``view`` (pointing at the viewer); the far hemisphere is dashed.

    Each sub-arc is sampled at ``ARC_SAMPLES`` points. Output depends only on
    the inputs, so repeated calls give identical text.
    """
    v = normalize(view)
    e1, e2 = tangent_frame(v)
    half = size / 2.0
    radius = 0.45 * size

    def xy(p):
        return half + radius * float(np.dot(p, e1)), half - radius * float(np.dot(p, e2))

    def fmt(p):
        x, y = xy(p)
        return f"{x:.3f},{y:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<style>{_STYLE}</style>",
        f'<circle class="sphere" cx="{half:.3f}" cy="{half:.3f}" r="{radius:.3f}"/>',
    ]
    for k, e in enumerate(dr.edges):
        first = slerp(e.polyline[0], e.polyline[1], ARC_SAMPLES)
        second = slerp(e.polyline[1], e.polyline[2], ARC_SAMPLES)
        samples = np.vstack([first, second[1:]])
        front = samples @ v >= 0.0
        x, y = e.edge
        out.append(f'<g class="edge" data-edge="{k}" data-diameter="{x}-{y}">')
        for is_front, piece in _runs(samples, front):
            d = "M" + " L".join(fmt(p) for p in piece)
            out.append(f'<path class="{"front" if is_front else "back"}" d="{d}"/>')
        out.append("</g>")
    for vert in dr.vertices:
        side = "front" if float(np.dot(vert.position, v)) >= 0.0 else "back"
        cx, cy = xy(vert.position)
        out.append(f'<circle class="vertex {vert.color.value} {side}" data-owner="{vert.owner}" '
                   f'cx="{cx:.3f}" cy="{cy:.3f}" r="{max(2.0, size / 120):.3f}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
