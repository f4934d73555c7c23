"""Direct-touch interaction primitives.

Line/bar charts get a slider-like x-projection with throttled tones and a
contact haptic; scatter plots get a fingertip scanning window whose radius
adapts to local point density, plus a directional lock that warns with
step tones when a straight stroke drifts off its row or column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .model import ChartModel, Viewport, data_to_screen, screen_to_data
from .sonification import SonifyParams, ToneSpec, pitch_for_value, series_timbre

LOCK_UNLOCKED = "unlocked"
LOCK_ARMED = "armed"
LOCK_LOCKED = "locked"
DIR_HORIZONTAL = "horizontal"
DIR_VERTICAL = "vertical"

STEP_UP = "step_up"
STEP_DOWN = "step_down"


@dataclass(frozen=True)
class ScanState:
    """Scanning-window state: which point ids are currently inside the
    dynamic radius."""

    radius_cover_distance: int = 3
    min_rad: float = 12.0
    max_rad: float = 48.0
    indices_within_radius: frozenset[int] = frozenset()


def scan_update(scan: ScanState, pos: tuple[float, float],
                points: list[tuple[int, tuple[float, float]]],
                ) -> tuple[int, float, ScanState]:
    """One scanning step over the visible points (id, screen position).

    The radius adapts to reach the k-th nearest point (k =
    radius_cover_distance), clamped to [min_rad, max_rad]; every point at or
    inside the adjusted radius is "hit", and each newly hit point fires one
    haptic pulse.  Returns (haptic_count, adjusted_radius, new_state).
    """
    if not points:
        return 0, scan.min_rad, replace(scan, indices_within_radius=frozenset())

    dists = sorted(
        (math.hypot(sx - pos[0], sy - pos[1]), pid)
        for pid, (sx, sy) in points)
    k = min(scan.radius_cover_distance, len(dists))
    raw_radius = dists[k - 1][0]
    adjusted = min(max(raw_radius, scan.min_rad), scan.max_rad)

    hit = frozenset(pid for d, pid in dists if d <= adjusted)
    newly_hit = hit - scan.indices_within_radius
    return len(newly_hit), adjusted, replace(scan, indices_within_radius=hit)


@dataclass(frozen=True)
class LockState:
    phase: str = LOCK_UNLOCKED
    direction: str | None = None
    lock_line: int | None = None
    recent_cells: tuple[tuple[int, int], ...] = ()


def _collinear_lock(cells: tuple[tuple[int, int], ...]) -> tuple[str, int] | None:
    if len(cells) < 3:
        return None
    (c0, r0), (c1, r1), (c2, r2) = cells[-3:]
    if r0 == r1 == r2 and (c1 - c0, c2 - c1) in ((1, 1), (-1, -1)):
        return DIR_HORIZONTAL, r0
    if c0 == c1 == c2 and (r1 - r0, r2 - r1) in ((1, 1), (-1, -1)):
        return DIR_VERTICAL, c0
    return None


def lock_update(lock: LockState,
                cell: tuple[int, int]) -> tuple[str | None, LockState]:
    """Track grid cell visits; emit ``step_up``/``step_down`` on deviation.

    Locking requires three consecutive distinct cells stepping along one row
    (or column).  A deviation while locked fires a step tone — screen-up is
    step-up — and restarts accumulation from the deviating cell in the armed
    phase.  No tone is ever emitted unless the lock was engaged.
    """
    if lock.recent_cells and lock.recent_cells[-1] == cell:
        return None, lock

    if lock.phase == LOCK_LOCKED:
        col, row = cell
        prev_col, prev_row = lock.recent_cells[-1]
        on_course = (row == lock.lock_line if lock.direction == DIR_HORIZONTAL
                     else col == lock.lock_line)
        if on_course:
            recent = (lock.recent_cells + (cell,))[-3:]
            return None, replace(lock, recent_cells=recent)
        if lock.direction == DIR_HORIZONTAL:
            feedback = STEP_UP if row < prev_row else STEP_DOWN
        else:
            feedback = STEP_UP if col > prev_col else STEP_DOWN
        return feedback, LockState(phase=LOCK_ARMED, recent_cells=(cell,))

    recent = (lock.recent_cells + (cell,))[-3:]
    found = _collinear_lock(recent)
    if found is not None:
        direction, line = found
        return None, LockState(phase=LOCK_LOCKED, direction=direction,
                               lock_line=line, recent_cells=recent)
    return None, LockState(phase=LOCK_ARMED, recent_cells=recent)


@dataclass(frozen=True)
class ThrottleState:
    min_interval_ms: float = 80.0
    last_emit_time: float | None = None


def throttle_gate(t: ThrottleState, now: float) -> tuple[bool, ThrottleState]:
    """Allow an emission iff at least min_interval has passed; suppressed
    emissions are dropped, not queued (gesture ends flush separately)."""
    if t.last_emit_time is not None and now - t.last_emit_time < t.min_interval_ms:
        return False, t
    return True, replace(t, last_emit_time=now)


@dataclass(frozen=True)
class SliderState:
    """Per-stroke state for the line/bar x-projection slider."""

    in_contact: bool = False
    pending_pos: tuple[float, float] | None = None


def nearest_point_by_x(model: ChartModel, point_ids: list[int],
                       x: float) -> int | None:
    """Nearest point id by x distance; ties prefer the smaller x, then id."""
    best = None
    for pid in point_ids:
        key = (abs(model.points[pid].x - x), model.points[pid].x, pid)
        if best is None or key < best[0]:
            best = (key, pid)
    return None if best is None else best[1]


def _seg_distance(q: tuple[float, float], a: tuple[float, float],
                  b: tuple[float, float]) -> float:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return math.hypot(q[0] - ax, q[1] - ay)
    t = min(max(((q[0] - ax) * dx + (q[1] - ay) * dy) / L2, 0.0), 1.0)
    return math.hypot(q[0] - (ax + t * dx), q[1] - (ay + t * dy))


def _rect_distance(q: tuple[float, float], x0: float, y0: float,
                   x1: float, y1: float) -> float:
    dx = max(x0 - q[0], 0.0, q[0] - x1)
    dy = max(y0 - q[1], 0.0, q[1] - y1)
    return math.hypot(dx, dy)


def _bar_rect(model: ChartModel, pid: int, visible_series: list[int],
              vp: Viewport, screen: tuple[float, float]
              ) -> tuple[float, float, float, float]:
    """Grouped-bar rectangle in screen space for one point."""
    p = model.points[pid]
    group = 0.8  # fraction of one category slot occupied by the bar group
    n = max(len(visible_series), 1)
    width = group / n
    slot = visible_series.index(p.series_index) if p.series_index in visible_series else 0
    x_lo = p.x - group / 2 + slot * width
    y_lo, y_hi = model.y_range
    baseline = 0.0 if y_lo <= 0.0 <= y_hi else (y_lo if y_lo > 0 else y_hi)
    sx0, sy0 = data_to_screen((x_lo, max(p.y, baseline)), vp, screen)
    sx1, sy1 = data_to_screen((x_lo + width, min(p.y, baseline)), vp, screen)
    return (min(sx0, sx1), min(sy0, sy1), max(sx0, sx1), max(sy0, sy1))


def element_distance(model: ChartModel, pos: tuple[float, float],
                     visible_ids: list[int], visible_series: list[int],
                     vp: Viewport, screen: tuple[float, float]) -> float:
    """Screen distance from pos to the nearest rendered line segment or bar."""
    best = math.inf
    if model.spec.kind == "bar":
        for pid in visible_ids:
            best = min(best, _rect_distance(
                pos, *_bar_rect(model, pid, visible_series, vp, screen)))
        return best
    by_series: dict[int, list[int]] = {}
    for pid in visible_ids:
        by_series.setdefault(model.points[pid].series_index, []).append(pid)
    for pids in by_series.values():
        pids.sort(key=lambda pid: (model.points[pid].x, pid))
        pts = [data_to_screen((model.points[pid].x, model.points[pid].y),
                              vp, screen) for pid in pids]
        if len(pts) == 1:
            best = min(best, math.hypot(pos[0] - pts[0][0], pos[1] - pts[0][1]))
        for a, b in zip(pts, pts[1:]):
            best = min(best, _seg_distance(pos, a, b))
    return best


def project_to_x(model: ChartModel, vp: Viewport, screen: tuple[float, float],
                 visible_ids: list[int], visible_series: list[int],
                 pos: tuple[float, float], now: float,
                 throttle: ThrottleState, slider: SliderState,
                 hit_tolerance_px: float,
                 params: SonifyParams,
                 ) -> tuple[ToneSpec | None, int, ThrottleState, SliderState]:
    """Slider step: tone for the nearest point by projected x (throttled),
    plus one haptic pulse on entering contact with the drawn element."""
    data_x = screen_to_data(pos, vp, screen)[0]
    pid = nearest_point_by_x(model, visible_ids, data_x)
    if pid is None:
        return None, 0, throttle, replace(slider, in_contact=False,
                                          pending_pos=None)
    tone = None
    allowed, throttle = throttle_gate(throttle, now)
    if allowed:
        tone = _slider_tone(model, pid, params)
        slider = replace(slider, pending_pos=None)
    else:
        slider = replace(slider, pending_pos=pos)

    dist = element_distance(model, pos, visible_ids, visible_series, vp, screen)
    contact = dist <= hit_tolerance_px
    haptic = 1 if contact and not slider.in_contact else 0
    slider = replace(slider, in_contact=contact)
    return tone, haptic, throttle, slider


def flush_slider(model: ChartModel, vp: Viewport, screen: tuple[float, float],
                 visible_ids: list[int], now: float,
                 throttle: ThrottleState, slider: SliderState,
                 params: SonifyParams,
                 ) -> tuple[ToneSpec | None, ThrottleState, SliderState]:
    """Gesture-end flush: the final pan position always sounds, even if the
    throttle had suppressed it."""
    if slider.pending_pos is None:
        return None, throttle, replace(slider, in_contact=False)
    data_x = screen_to_data(slider.pending_pos, vp, screen)[0]
    pid = nearest_point_by_x(model, visible_ids, data_x)
    slider = SliderState()
    if pid is None:
        return None, throttle, slider
    throttle = replace(throttle, last_emit_time=now)
    return _slider_tone(model, pid, params), throttle, slider


def _slider_tone(model: ChartModel, pid: int, params: SonifyParams) -> ToneSpec:
    p = model.points[pid]
    pitch = pitch_for_value(p.y, model.y_range[0], model.y_range[1], params)
    return ToneSpec(pitch, params.default_tone_ms,
                    series_timbre(p.series_index))


def apply_pinch(vp: Viewport, scale: float, focus: tuple[float, float],
                screen: tuple[float, float], full: Viewport) -> Viewport:
    """Zoom both axes about the data point under ``focus``; the result is
    clamped inside the full padded range (zooming out past it yields it)."""
    if scale <= 0:
        raise ValueError("pinch scale must be positive")
    fx, fy = screen_to_data(focus, vp, screen)

    def solve(lo: float, hi: float, f: float, full_lo: float,
              full_hi: float) -> tuple[float, float]:
        span = (hi - lo) / scale
        if span >= full_hi - full_lo:
            return full_lo, full_hi
        frac = (f - lo) / (hi - lo)
        new_lo = f - frac * span
        new_lo = min(max(new_lo, full_lo), full_hi - span)
        return new_lo, new_lo + span

    x_lo, x_hi = solve(vp.x_lo, vp.x_hi, fx, full.x_lo, full.x_hi)
    y_lo, y_hi = solve(vp.y_lo, vp.y_hi, fy, full.y_lo, full.y_hi)
    return Viewport(x_lo, x_hi, y_lo, y_hi)
