"""Self-contained SVG rendering of direction fields.

No plotting library: the documents are assembled as strings with
fixed-decimal coordinates, so the same inputs always produce the same
bytes.  Each grid sample emits exactly one ``<g class="arrow">`` element;
a sample whose direction is undefined (field zero, or the query falls
inside an obstacle disk) emits a small dot inside that group instead of a
shaft, keeping the element count equal to the grid size.

World plots overlay the obstacle disks, the outer influence circle of
each obstacle in black, the inner safety circle in red, and a goal
marker, matching the source material's figure conventions.  Coordinates
are drawn y-up.
"""

from __future__ import annotations

import math

from .blending import StaticWorld, _plan_xy
from .errors import InvalidQueryError
from .fields import FieldParams, eval_field
from .geometry import NORM_EPS_SQ, Vec2

__all__ = ["render_field"]

_CANVAS_W = 720.0
# head half-angle ~ 25 degrees, applied to the tip segment pair
_COS_H = math.cos(math.radians(155.0))
_SIN_H = math.sin(math.radians(155.0))


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _direction_fn(source):
    if isinstance(source, StaticWorld):
        def world_dir(x: float, y: float):
            try:
                fx, fy = _plan_xy(source, x, y)
            except InvalidQueryError:
                return None
            n2 = fx * fx + fy * fy
            if n2 < NORM_EPS_SQ:
                return None
            inv = 1.0 / math.sqrt(n2)
            return fx * inv, fy * inv
        return world_dir
    if isinstance(source, FieldParams):
        def raw_dir(x: float, y: float):
            f = eval_field(source, Vec2(x, y))
            n2 = f.x * f.x + f.y * f.y
            if n2 < NORM_EPS_SQ:
                return None
            inv = 1.0 / math.sqrt(n2)
            return f.x * inv, f.y * inv
        return raw_dir
    raise TypeError(f"expected FieldParams or StaticWorld, got {type(source).__name__}")


def render_field(source, bounds: tuple[float, float, float, float], grid_n: int = 21) -> str:
    """SVG document (as a string) showing the direction of ``source`` on a
    uniform grid_n x grid_n grid over ``bounds`` = (xmin, xmax, ymin, ymax).

    ``source`` is either a raw field parameterization or a full static
    world (whose blended plan is drawn, with obstacle/zone overlays).
    """
    x0, x1, y0, y1 = (float(b) for b in bounds)
    if not (x0 < x1 and y0 < y1):
        raise ValueError(f"degenerate bounds {bounds}")
    if grid_n < 2:
        raise ValueError(f"grid_n must be at least 2, got {grid_n}")

    w = _CANVAS_W
    h = _CANVAS_W * (y1 - y0) / (x1 - x0)
    sx = w / (x1 - x0)
    sy = h / (y1 - y0)

    def px(x: float) -> float:
        return (x - x0) * sx

    def py(y: float) -> float:
        return (y1 - y) * sy

    direction = _direction_fn(source)
    cell = min(w / (grid_n - 1), h / (grid_n - 1))
    half = 0.42 * cell

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">\n',
        f'<rect width="{_fmt(w)}" height="{_fmt(h)}" fill="#ffffff"/>\n',
    ]

    if isinstance(source, StaticWorld):
        for ob in source.obstacles:
            cx = _fmt(px(ob.obstacle.center.x))
            cy = _fmt(py(ob.obstacle.center.y))
            parts.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_fmt(ob.obstacle.radius * sx)}" '
                f'fill="#c8c8c8" stroke="none"/>\n'
            )
            parts.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_fmt(ob.rho_Z * sx)}" '
                f'fill="none" stroke="#cc2222" stroke-width="1.2"/>\n'
            )
            parts.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_fmt(ob.rho_F * sx)}" '
                f'fill="none" stroke="#000000" stroke-width="1.2"/>\n'
            )

    step_x = (x1 - x0) / (grid_n - 1)
    step_y = (y1 - y0) / (grid_n - 1)
    for iy in range(grid_n):
        y = y0 + iy * step_y
        for ix in range(grid_n):
            x = x0 + ix * step_x
            cxp = px(x)
            cyp = py(y)
            d = direction(x, y)
            if d is None:
                parts.append(
                    f'<g class="arrow"><circle cx="{_fmt(cxp)}" cy="{_fmt(cyp)}" '
                    f'r="1.60" fill="#bb3333"/></g>\n'
                )
                continue
            ux, uy = d
            # screen-space direction (y axis flips)
            vx = ux
            vy = -uy
            tx = cxp + half * vx
            ty = cyp + half * vy
            bx = cxp - half * vx
            by = cyp - half * vy
            hl = 0.45 * half
            h1x = tx + hl * (vx * _COS_H - vy * _SIN_H)
            h1y = ty + hl * (vx * _SIN_H + vy * _COS_H)
            h2x = tx + hl * (vx * _COS_H + vy * _SIN_H)
            h2y = ty + hl * (-vx * _SIN_H + vy * _COS_H)
            parts.append(
                f'<g class="arrow" stroke="#334455" stroke-width="1.1" fill="none">'
                f'<line x1="{_fmt(bx)}" y1="{_fmt(by)}" x2="{_fmt(tx)}" y2="{_fmt(ty)}"/>'
                f'<path d="M {_fmt(h1x)} {_fmt(h1y)} L {_fmt(tx)} {_fmt(ty)} '
                f'L {_fmt(h2x)} {_fmt(h2y)}"/></g>\n'
            )

    if isinstance(source, StaticWorld):
        gx = px(source.goal.position.x)
        gy = py(source.goal.position.y)
        hx = gx + 16.0 * math.cos(source.goal.heading)
        hy = gy - 16.0 * math.sin(source.goal.heading)
        parts.append(
            f'<g class="goal"><circle cx="{_fmt(gx)}" cy="{_fmt(gy)}" r="4.00" '
            f'fill="#1155cc"/><line x1="{_fmt(gx)}" y1="{_fmt(gy)}" '
            f'x2="{_fmt(hx)}" y2="{_fmt(hy)}" stroke="#1155cc" stroke-width="2.0"/></g>\n'
        )

    parts.append("</svg>\n")
    return "".join(parts)
