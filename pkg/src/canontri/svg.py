"""SVG drawing of the developed cusp tessellation.

The picture is rotated and scaled so the horizontal period is 1000 units
along the x-axis.  Hinge layers are shaded grey.
"""
from __future__ import annotations

import numpy as np

from .geometry import CuspDevelopment

__all__ = ["emit_svg", "domain_triangles"]

PERIOD_UNITS = 1000.0
HINGE_FILL = "#b4b4b4"
PLAIN_FILL = "#ffffff"
STROKE = 1.5


def domain_triangles(dev: CuspDevelopment) -> list[int]:
    """One fundamental domain: the first cusp component, halved by the involution for torus bundles."""
    tids = sorted(dev.components[0])
    if dev.sigma is not None:
        tids = [t for t in tids if dev.graph.triangles[t].vertex in (0, 1)]
    return tids


def _num(x: float) -> str:
    # round first so tiny negatives do not print as -0.000
    return f"{round(float(x), 3) + 0.0:.3f}"


def _pts(zs) -> str:
    return " ".join(f"{_num(z.real)},{_num(-z.imag)}" for z in zs)


def emit_svg(dev: CuspDevelopment, periods: int = 1) -> bytes:
    h = dev.periods.get("horizontal")
    v = dev.periods.get("vertical")
    if h is None or v is None:
        h, v = 1 + 0j, 1j
    k = PERIOD_UNITS / abs(h) * np.conj(h) / abs(h)  # normalizing similarity
    hh, vv = h * k, v * k
    domain = set(domain_triangles(dev))
    comp = sorted(dev.components[0])
    tiles = [i * hh + j * vv for j in range(periods) for i in range(periods)]

    polys = []
    for shift in tiles:
        for t in comp:
            T = dev.graph.triangles[t]
            zs = [z * k + shift for z in dev.triangle(t)]
            polys.append((shift == 0 and t in domain, T, zs))

    allz = np.array([z for *_, zs in polys for z in zs] + [0, hh, hh + vv, vv])
    pad = 20.0
    x0, x1 = allz.real.min() - pad, allz.real.max() + pad
    y0, y1 = -allz.imag.max() - pad, -allz.imag.min() + pad

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_num(x0)} {_num(y0)} {_num(x1 - x0)} {_num(y1 - y0)}">',
        f'<g id="domain" stroke="#000000" stroke-width="{STROKE}">',
    ]
    rest = []
    for in_domain, T, zs in polys:
        fill = HINGE_FILL if T.hinge else PLAIN_FILL
        el = (
            f'<polygon class="{"hinge" if T.hinge else "plain"}" data-layer="{T.layer}" '
            f'fill="{fill}" points="{_pts(zs)}"/>'
        )
        (lines if in_domain else rest).append(el)
    lines.append("</g>")
    lines.append(f'<g id="tiles" stroke="#000000" stroke-width="{STROKE}" opacity="0.6">')
    lines += rest
    lines.append("</g>")
    lines.append(
        f'<polygon id="period" fill="none" stroke="#c00000" stroke-width="{2 * STROKE}" '
        f'stroke-dasharray="8,6" points="{_pts([0, hh, hh + vv, vv])}"/>'
    )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode()
