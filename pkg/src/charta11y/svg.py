"""Render finger traces over the chart as an SVG document.

Each touch stroke (down..up) becomes one path, colored on a red-to-blue ramp
by when it happened, so exploration patterns can be eyeballed after the fact.
"""

from __future__ import annotations

from .events import InputEvent, TOUCH_DOWN, TOUCH_MOVE, TOUCH_UP
from .model import data_to_screen
from .session import Session

SERIES_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                 "#8c564b", "#e377c2", "#7f7f7f")


def _ramp_color(t: float) -> str:
    """0 -> red (early), 1 -> blue (late)."""
    t = min(max(t, 0.0), 1.0)
    r = round(214 * (1 - t) + 31 * t)
    g = round(39 * (1 - t) + 119 * t)
    b = round(40 * (1 - t) + 180 * t)
    return f"#{r:02x}{g:02x}{b:02x}"


def _strokes(events: list[InputEvent]) -> list[list[tuple[float, float, int]]]:
    strokes: list[list[tuple[float, float, int]]] = []
    current: list[tuple[float, float, int]] | None = None
    for ev in events:
        if ev.kind == TOUCH_DOWN:
            current = [(ev.position[0], ev.position[1], ev.time)]
            strokes.append(current)
        elif ev.kind == TOUCH_MOVE and ev.position is not None:
            if current is None:
                current = [(ev.position[0], ev.position[1], ev.time)]
                strokes.append(current)
            else:
                current.append((ev.position[0], ev.position[1], ev.time))
        elif ev.kind == TOUCH_UP:
            current = None
    return strokes


def _chart_elements(session: Session) -> list[str]:
    model = session.model
    vp = model.full_viewport
    parts = []
    if model.spec.kind == "scatter":
        for p in model.points:
            sx, sy = data_to_screen((p.x, p.y), vp, session.screen)
            color = SERIES_COLORS[p.series_index % len(SERIES_COLORS)]
            parts.append(f'<circle cx="{sx:.2f}" cy="{sy:.2f}" r="3" '
                         f'fill="{color}" fill-opacity="0.7"/>')
        return parts
    by_series: dict[int, list[int]] = {}
    for pid, p in enumerate(model.points):
        by_series.setdefault(p.series_index, []).append(pid)
    for s in sorted(by_series):
        pids = sorted(by_series[s], key=lambda pid: (model.points[pid].x, pid))
        color = SERIES_COLORS[s % len(SERIES_COLORS)]
        pts = [data_to_screen((model.points[pid].x, model.points[pid].y),
                              vp, session.screen) for pid in pids]
        if model.spec.kind == "line":
            coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
            parts.append(f'<polyline points="{coords}" fill="none" '
                         f'stroke="{color}" stroke-width="1.5"/>')
        else:  # bar
            for (sx, sy), pid in zip(pts, pids):
                base_y = data_to_screen((0, max(model.y_range[0], 0.0)),
                                        vp, session.screen)[1]
                top = min(sy, base_y)
                height = abs(base_y - sy)
                parts.append(f'<rect x="{sx - 6:.2f}" y="{top:.2f}" '
                             f'width="12" height="{height:.2f}" '
                             f'fill="{color}" fill-opacity="0.6"/>')
    return parts


def trace_svg(session: Session, events: list[InputEvent]) -> str:
    """SVG with the chart underneath and one path per touch stroke."""
    w, h = session.screen
    strokes = _strokes(events)
    times = [t for stroke in strokes for (_, _, t) in stroke]
    t_lo = min(times) if times else 0
    t_hi = max(times) if times else 1
    span = max(t_hi - t_lo, 1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:g}" '
        f'height="{h:g}" viewBox="0 0 {w:g} {h:g}">',
        f'<rect x="0" y="0" width="{w:g}" height="{h:g}" fill="#fcfcfc"/>',
    ]
    parts.extend(_chart_elements(session))
    for stroke in strokes:
        mid_t = stroke[len(stroke) // 2][2]
        color = _ramp_color((mid_t - t_lo) / span)
        d = "M " + " L ".join(f"{x:.2f} {y:.2f}" for x, y, _ in stroke)
        if len(stroke) == 1:
            x, y, _ = stroke[0]
            d = f"M {x:.2f} {y:.2f} L {x + 0.1:.2f} {y:.2f}"
        parts.append(f'<path d="{d}" fill="none" stroke="{color}" '
                     f'stroke-width="2.5" stroke-opacity="0.75" '
                     f'stroke-linecap="round"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
