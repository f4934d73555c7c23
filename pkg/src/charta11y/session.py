"""Top-level interaction state machine.

A session owns one chart, one event stream, and all mode state.  ``dispatch``
is total: every well-formed event in every state produces a defined (possibly
empty) feedback list, so replaying a recorded stream is always deterministic.

Navigation mode lays the semantic tree out as touch regions and speaks or
sonifies whatever the finger lands on; direct-touch mode maps the finger
straight onto chart space.  Switching modes preserves position: entering
direct touch zooms to the focused bin, and leaving lands back on the node
under the last touch.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import dtm, narration, sonification
from .events import (DOUBLE_TAP, DOUBLE_TAP_HOLD_MOVE, FeedbackEvent,
                     InputEvent, PINCH, ROTOR_FLICK, ROTOR_ROTATE, SPLIT_TAP,
                     SWIPE, THREE_FINGER_SWIPE, TOUCH_DOWN, TOUCH_MOVE,
                     TOUCH_UP, Z_SCRUB)
from .model import ChartModel, Viewport, data_to_screen, screen_to_data
from .narration import MOVE_ADJACENT, MOVE_NEW, MOVE_REPEAT, NavContext
from .sonification import SonifyParams, ToneSpec
from .tree import (GridConfig, LEVEL_BIN, LEVEL_CELL, LEVEL_FILTER,
                   LEVEL_OVERVIEW, LEVEL_POINT, LEVEL_SERIES, LEVEL_ZONE,
                   PageLayout, SemanticNode, ZONE_DATA, ZONE_FILTERS, ZONE_X,
                   ZONE_Y, build_semantic_tree, default_grid, hit_test,
                   layout_page)

MODE_SNF = "SNF"
MODE_DTM = "DTM"

ROTOR_SERIES = "series"
ROTOR_SONIFY = "sonification_toggle"
ROTOR_ORDER = (ROTOR_SERIES, ROTOR_SONIFY)
ROTOR_NAMES = {ROTOR_SERIES: "Series", ROTOR_SONIFY: "Sonification"}

# rapid-navigation jump targets for double-tap-and-hold plus a direction
_JUMP_TARGETS = {"up": ZONE_Y, "down": ZONE_X,
                 "left": ZONE_FILTERS, "right": ZONE_DATA}

_DATA_LEVELS = (LEVEL_OVERVIEW, LEVEL_BIN, LEVEL_SERIES, LEVEL_CELL,
                LEVEL_POINT)


@dataclass(frozen=True)
class EngineParams:
    """Interaction constants; every value is overridable via config."""

    min_touch_px: float = 48.0
    radius_cover_distance: int = 3
    min_rad: float = 12.0
    max_rad: float = 48.0
    hit_tolerance_px: float = 16.0
    min_interval_ms: float = 80.0
    axis_strip_px: float = 40.0
    sonify: SonifyParams = field(default_factory=SonifyParams)


class Session:
    """One user's exploration of one chart."""

    def __init__(self, model: ChartModel, grid: GridConfig | None = None,
                 screen: tuple[float, float] = (390.0, 844.0),
                 params: EngineParams | None = None) -> None:
        self.model = model
        self.params = params or EngineParams()
        self.screen = (float(screen[0]), float(screen[1]))
        self.grid = grid or default_grid(model)
        self.tree = build_semantic_tree(model, self.grid)

        n_series = len(model.spec.series_names)
        self.mode = MODE_SNF
        self.focus_id = self.tree.root_id
        self.page_index = 0
        self.active_rotor = ROTOR_SERIES
        self.sonification_on = False
        self.active_series: int | None = None
        self.filters: list[bool] = [True] * n_series
        self.viewport: Viewport = model.full_viewport
        self.scan = dtm.ScanState(self.params.radius_cover_distance,
                                  self.params.min_rad, self.params.max_rad)
        self.lock = dtm.LockState()
        self.throttle = dtm.ThrottleState(self.params.min_interval_ms)
        self.slider = dtm.SliderState()
        self.repeat_cache: dict[str, str] = {}
        self.snf_return_id = self.focus_id
        self.dtm_touched = False
        self.last_touch_data: tuple[float, float] | None = None
        self._layout_cache: dict[tuple, PageLayout] = {}

    # ------------------------------------------------------------------
    # structure helpers

    def _filtered_children(self, node_id: str) -> list[str]:
        out = []
        for cid in self.tree.children_of(node_id):
            node = self.tree.node(cid)
            if node.level == LEVEL_POINT and not self.filters[node.series_index]:
                continue
            out.append(cid)
        return out

    def _sibling_ids(self, node_id: str) -> list[str]:
        parent = self.tree.parent_of(node_id)
        if parent is None:
            return [node_id]
        return self._filtered_children(parent)

    def _layout_for(self, node_id: str, page: int) -> PageLayout:
        parent = self.tree.parent_of(node_id) or "__root__"
        key = (parent, tuple(self.filters), page)
        layout = self._layout_cache.get(key)
        if layout is None:
            nodes = [self.tree.node(i) for i in self._sibling_ids(node_id)]
            layout = layout_page(nodes, self.screen, page,
                                 self.params.min_touch_px)
            self._layout_cache[key] = layout
        return layout

    def current_layout(self) -> PageLayout:
        return self._layout_for(self.focus_id, self.page_index)

    def _focus_on(self, node_id: str) -> None:
        sibs = self._sibling_ids(node_id)
        idx = sibs.index(node_id)
        per_page = self._layout_for(node_id, 0).per_page
        self.focus_id = node_id
        self.page_index = idx // per_page

    def _visible_point_ids(self) -> list[int]:
        out = []
        for pid, p in enumerate(self.model.points):
            if not self.filters[p.series_index]:
                continue
            if self.active_series is not None and p.series_index != self.active_series:
                continue
            if self.mode == MODE_DTM and not self.viewport.contains(p.x, p.y):
                continue
            out.append(pid)
        return out

    def _visible_series(self) -> list[int]:
        return [s for s in range(len(self.filters))
                if self.filters[s]
                and (self.active_series is None or s == self.active_series)]

    # ------------------------------------------------------------------
    # narration / sonification of nodes

    def _narration_text(self, node: SemanticNode, ctx: NavContext) -> str:
        cached = self.repeat_cache.get(node.id)
        if ctx.move_kind == MOVE_REPEAT and cached is not None:
            return cached
        model, tr = self.model, self.tree
        if node.level == LEVEL_OVERVIEW:
            text = narration.overview_text(model)
        elif node.level == LEVEL_ZONE:
            text = narration.narrate_zone(node.zone_kind)
        elif node.level == LEVEL_BIN:
            text = narration.describe_bin(model, node, len(model.points))
        elif node.level == LEVEL_SERIES:
            text = narration.describe_series_in_bin(model, node,
                                                    len(model.points))
        elif node.level == LEVEL_CELL:
            text = narration.describe_cell(node, tr.max_cell_count)
        elif node.level == LEVEL_FILTER:
            text = narration.filter_node_text(model, node.series_index,
                                              self.filters[node.series_index])
        else:
            text = narration.narrate_point(model, model.points[node.point_id],
                                           ctx)
        if (not all(self.filters)
                and node.level in (LEVEL_BIN, LEVEL_SERIES, LEVEL_CELL,
                                   LEVEL_POINT)):
            text += narration.FILTERS_ACTIVE_SUFFIX
        self.repeat_cache[node.id] = text
        return text

    def _node_tones(self, node: SemanticNode) -> list[ToneSpec]:
        model, tr, sp = self.model, self.tree, self.params.sonify
        if node.level == LEVEL_OVERVIEW:
            return [sonification.series_overview_tone(s, model, sp)
                    for s in range(len(self.filters)) if self.filters[s]]
        if node.level == LEVEL_SERIES:
            bin_id = node.parent
            return sonification.bin_tone_sequence(
                tr, bin_id, node.series_index, sp,
                hidden=not self.filters[node.series_index])
        if node.level == LEVEL_CELL:
            count = (len(node.point_ids)
                     if self.filters[node.series_index] else 0)
            return [sonification.tone_for_cell(count, tr.max_cell_count,
                                               node.series_index, sp)]
        if node.level == LEVEL_POINT:
            p = model.points[node.point_id]
            pitch = sonification.pitch_for_value(
                p.y, model.y_range[0], model.y_range[1], sp)
            return [ToneSpec(pitch, sp.default_tone_ms,
                             sonification.series_timbre(p.series_index))]
        # bin level
        if model.spec.kind != "scatter":
            return self._line_bin_tones(node)
        if node.id.startswith("xbin:") and self.active_series is not None:
            return sonification.bin_tone_sequence(
                tr, node.id, self.active_series, sp,
                hidden=not self.filters[self.active_series])
        # per-series density tones (chart-wide series view or y-axis bins)
        series = ([self.active_series] if self.active_series is not None
                  else [s for s in range(len(self.filters)) if self.filters[s]])
        return [sonification.tone_for_cell(
            node.series_counts[s] if self.filters[s] else 0,
            tr.max_bin_series_count, s, sp, gap_after_ms=sp.gap_ms)
            for s in series]

    def _line_bin_tones(self, node: SemanticNode) -> list[ToneSpec]:
        model, sp = self.model, self.params.sonify
        lo, hi = model.y_range
        if self.active_series is not None:
            ys = [model.points[pid].y for pid in node.point_ids
                  if model.points[pid].series_index == self.active_series]
            if not ys or not self.filters[self.active_series]:
                return [sonification.numb_tone(sp)]
            return [ToneSpec(sonification.pitch_for_value(y, lo, hi, sp),
                             sp.point_seq_tone_ms,
                             sonification.series_timbre(self.active_series),
                             sp.point_seq_gap_ms) for y in ys]
        tones = []
        for s in range(len(self.filters)):
            if not self.filters[s]:
                continue
            ys = [model.points[pid].y for pid in node.point_ids
                  if model.points[pid].series_index == s]
            if not ys:
                tones.append(sonification.numb_tone(sp, sp.gap_ms))
            else:
                mean = sum(ys) / len(ys)
                tones.append(ToneSpec(
                    sonification.pitch_for_value(mean, lo, hi, sp),
                    sp.default_tone_ms, sonification.series_timbre(s),
                    sp.gap_ms))
        return tones

    def _node_feedback(self, node: SemanticNode, ctx: NavContext,
                       time: int) -> list[FeedbackEvent]:
        if (self.sonification_on and node.level in _DATA_LEVELS):
            tones = self._node_tones(node)
            if len(tones) == 1 and node.level in (LEVEL_CELL, LEVEL_POINT):
                return [FeedbackEvent.single_tone(tones[0], time)]
            return [FeedbackEvent.tone_sequence(tones, time)]
        return [FeedbackEvent.speech(self._narration_text(node, ctx), time)]

    def _unavailable(self, time: int) -> list[FeedbackEvent]:
        return [FeedbackEvent.single_tone(sonification.unavailable_earcon(),
                                          time)]

    # ------------------------------------------------------------------
    # lifecycle

    def open_feedback(self) -> list[FeedbackEvent]:
        """Feedback announced when the session starts: the chart overview."""
        root = self.tree.node(self.tree.root_id)
        text = self._narration_text(root, NavContext(MOVE_NEW))
        return [FeedbackEvent.speech(text, 0)]

    def dispatch(self, event: InputEvent) -> list[FeedbackEvent]:
        event.validate()
        pos = event.position
        if pos is not None:
            w, h = self.screen
            pos = (min(max(pos[0], 0.0), w), min(max(pos[1], 0.0), h))
        if self.mode == MODE_SNF:
            return self._dispatch_snf(event, pos)
        return self._dispatch_dtm(event, pos)

    # ------------------------------------------------------------------
    # navigation-mode handlers

    def _dispatch_snf(self, event: InputEvent,
                      pos: tuple[float, float] | None) -> list[FeedbackEvent]:
        t = event.time
        if event.kind in (TOUCH_DOWN, TOUCH_MOVE):
            return self._snf_touch(pos, t)
        if event.kind == TOUCH_UP:
            return []
        if event.kind == SWIPE:
            if event.direction == "right":
                return self._move_sibling(1, t)
            if event.direction == "left":
                return self._move_sibling(-1, t)
            return self._rotor_flick(event.direction, t)
        if event.kind == DOUBLE_TAP:
            return self._double_tap(t)
        if event.kind == DOUBLE_TAP_HOLD_MOVE:
            if event.direction == "hold":
                return self.transition_mode(t)
            return self._jump_to_zone(_JUMP_TARGETS[event.direction], t)
        if event.kind == Z_SCRUB:
            return self._level_up(t)
        if event.kind == THREE_FINGER_SWIPE:
            return self._change_page(1 if event.direction == "left" else -1, t)
        if event.kind == ROTOR_ROTATE:
            return self._rotor_rotate(t)
        if event.kind == ROTOR_FLICK:
            return self._rotor_flick(event.direction, t)
        # pinch and split_tap belong to direct-touch mode
        return self._unavailable(t)

    def _snf_touch(self, pos: tuple[float, float],
                   time: int) -> list[FeedbackEvent]:
        layout = self.current_layout()
        node_id = hit_test(layout, pos)
        prev = self.focus_id
        if node_id == prev:
            ctx = NavContext(MOVE_REPEAT, prev)
        else:
            sibs = self._sibling_ids(prev)
            adjacent = (node_id in sibs and prev in sibs
                        and abs(sibs.index(node_id) - sibs.index(prev)) == 1)
            ctx = NavContext(MOVE_ADJACENT if adjacent else MOVE_NEW, prev)
            self.focus_id = node_id
        return self._node_feedback(self.tree.node(node_id), ctx, time)

    def _move_sibling(self, delta: int, time: int) -> list[FeedbackEvent]:
        sibs = self._sibling_ids(self.focus_id)
        idx = sibs.index(self.focus_id)
        new_idx = idx + delta
        if not 0 <= new_idx < len(sibs):
            return self._unavailable(time)
        prev_page = self.page_index
        per_page = self.current_layout().per_page
        self.focus_id = sibs[new_idx]
        self.page_index = new_idx // per_page
        feedback = self._node_feedback(self.tree.node(self.focus_id),
                                       NavContext(MOVE_ADJACENT, sibs[idx]),
                                       time)
        if self.page_index != prev_page:
            feedback.insert(0, FeedbackEvent.single_tone(
                sonification.page_change_earcon(), time))
        return feedback

    def _double_tap(self, time: int) -> list[FeedbackEvent]:
        node = self.tree.node(self.focus_id)
        if node.level == LEVEL_FILTER:
            return self.toggle_series_filter(node.series_index, time)
        children = self._filtered_children(self.focus_id)
        if not children:
            return self._node_feedback(node, NavContext(MOVE_REPEAT,
                                                        self.focus_id), time)
        self.focus_id = children[0]
        self.page_index = 0
        return self._node_feedback(self.tree.node(self.focus_id),
                                   NavContext(MOVE_NEW, node.id), time)

    def _level_up(self, time: int) -> list[FeedbackEvent]:
        parent = self.tree.parent_of(self.focus_id)
        if parent is None:
            return self._unavailable(time)
        prev = self.focus_id
        self._focus_on(parent)
        return self._node_feedback(self.tree.node(parent),
                                   NavContext(MOVE_NEW, prev), time)

    def _jump_to_zone(self, zone_kind: str, time: int) -> list[FeedbackEvent]:
        prev = self.focus_id
        self._focus_on(self.tree.zone(zone_kind))
        return self._node_feedback(self.tree.node(self.focus_id),
                                   NavContext(MOVE_NEW, prev), time)

    def _change_page(self, delta: int, time: int) -> list[FeedbackEvent]:
        layout = self.current_layout()
        new_page = self.page_index + delta
        if not 0 <= new_page < layout.page_count:
            return self._unavailable(time)
        sibs = self._sibling_ids(self.focus_id)
        prev = self.focus_id
        self.page_index = new_page
        self.focus_id = sibs[new_page * layout.per_page]
        feedback = [FeedbackEvent.single_tone(
            sonification.page_change_earcon(), time)]
        feedback += self._node_feedback(self.tree.node(self.focus_id),
                                        NavContext(MOVE_NEW, prev), time)
        return feedback

    def _rotor_rotate(self, time: int) -> list[FeedbackEvent]:
        idx = ROTOR_ORDER.index(self.active_rotor)
        self.active_rotor = ROTOR_ORDER[(idx + 1) % len(ROTOR_ORDER)]
        return [FeedbackEvent.speech(ROTOR_NAMES[self.active_rotor], time)]

    def _rotor_flick(self, direction: str, time: int) -> list[FeedbackEvent]:
        if self.active_rotor == ROTOR_SONIFY:
            self.sonification_on = not self.sonification_on
            text = "Sonification on" if self.sonification_on else "Sonification off"
            return [FeedbackEvent.speech(text, time)]
        return self._cycle_series(1 if direction == "down" else -1, time)

    def _cycle_series(self, delta: int, time: int) -> list[FeedbackEvent]:
        order: list[int | None] = [None] + list(range(len(self.filters)))
        idx = order.index(self.active_series)
        self.active_series = order[(idx + delta) % len(order)]
        self.scan = replace(self.scan, indices_within_radius=frozenset())
        if self.active_series is None:
            return [FeedbackEvent.speech("Overview", time)]
        name = self.model.spec.series_names[self.active_series]
        return [FeedbackEvent.speech(name, time)]

    def toggle_series_filter(self, series_index: int,
                             time: int) -> list[FeedbackEvent]:
        """Hide or show one series; the last visible series cannot be hidden."""
        if self.filters[series_index] and sum(self.filters) == 1:
            return self._unavailable(time)
        self.filters[series_index] = not self.filters[series_index]
        self.scan = replace(self.scan, indices_within_radius=frozenset())
        self.repeat_cache.pop(f"filter:{series_index}", None)
        name = self.model.spec.series_names[series_index]
        state = "shown" if self.filters[series_index] else "hidden"
        return [FeedbackEvent.speech(f"{name} {state}", time)]

    # ------------------------------------------------------------------
    # direct-touch-mode handlers

    def _dispatch_dtm(self, event: InputEvent,
                      pos: tuple[float, float] | None) -> list[FeedbackEvent]:
        t = event.time
        if event.kind == TOUCH_DOWN:
            self.scan = replace(self.scan, indices_within_radius=frozenset())
            self.lock = dtm.LockState()
            self.slider = dtm.SliderState()
            return self._dtm_touch(pos, t)
        if event.kind == TOUCH_MOVE:
            return self._dtm_touch(pos, t)
        if event.kind == TOUCH_UP:
            return self._dtm_touch_up(t)
        if event.kind == PINCH:
            return self._pinch(event.scale, pos, t)
        if event.kind == SPLIT_TAP:
            return [FeedbackEvent.speech(self.split_tap_info(pos), t)]
        if event.kind == SWIPE:
            if event.direction == "down":
                return self._cycle_series(1, t)
            if event.direction == "up":
                return self._cycle_series(-1, t)
            return self._unavailable(t)
        if event.kind == DOUBLE_TAP_HOLD_MOVE and event.direction == "hold":
            return self.transition_mode(t)
        return self._unavailable(t)

    def _dtm_touch(self, pos: tuple[float, float],
                   time: int) -> list[FeedbackEvent]:
        self.dtm_touched = True
        self.last_touch_data = screen_to_data(pos, self.viewport, self.screen)
        visible = self._visible_point_ids()
        if self.model.spec.kind == "scatter":
            return self._scatter_touch(pos, visible, time)
        tone, haptic, self.throttle, self.slider = dtm.project_to_x(
            self.model, self.viewport, self.screen, visible,
            self._visible_series(), pos, time, self.throttle, self.slider,
            self.params.hit_tolerance_px, self.params.sonify)
        feedback = []
        if tone is not None:
            feedback.append(FeedbackEvent.single_tone(tone, time))
        if haptic:
            feedback.append(FeedbackEvent.haptic(haptic, time))
        return feedback

    def _scatter_touch(self, pos: tuple[float, float], visible: list[int],
                       time: int) -> list[FeedbackEvent]:
        screen_pts = [
            (pid, data_to_screen((self.model.points[pid].x,
                                  self.model.points[pid].y),
                                 self.viewport, self.screen))
            for pid in visible]
        haptics, _radius, self.scan = dtm.scan_update(self.scan, pos,
                                                      screen_pts)
        feedback = []
        if haptics:
            feedback.append(FeedbackEvent.haptic(haptics, time))
        step, self.lock = dtm.lock_update(self.lock, self._grid_cell(pos))
        if step is not None:
            tones = (sonification.step_up_tones() if step == dtm.STEP_UP
                     else sonification.step_down_tones())
            feedback.append(FeedbackEvent.tone_sequence(tones, time))
        return feedback

    def _grid_cell(self, pos: tuple[float, float]) -> tuple[int, int]:
        w, h = self.screen
        col = min(int(pos[0] / (w / self.grid.x_bins)), self.grid.x_bins - 1)
        row = min(int(pos[1] / (h / self.grid.y_cells_per_bin)),
                  self.grid.y_cells_per_bin - 1)
        return (col, row)

    def _dtm_touch_up(self, time: int) -> list[FeedbackEvent]:
        if self.model.spec.kind == "scatter":
            self.lock = dtm.LockState()
            return []
        tone, self.throttle, self.slider = dtm.flush_slider(
            self.model, self.viewport, self.screen, self._visible_point_ids(),
            time, self.throttle, self.slider, self.params.sonify)
        return [] if tone is None else [FeedbackEvent.single_tone(tone, time)]

    def _pinch(self, scale: float, focus: tuple[float, float],
               time: int) -> list[FeedbackEvent]:
        self.viewport = dtm.apply_pinch(self.viewport, scale, focus,
                                        self.screen, self.model.full_viewport)
        self.scan = replace(self.scan, indices_within_radius=frozenset())
        interval = narration.format_x_interval(self.model, self.viewport.x_lo,
                                               self.viewport.x_hi)
        return [FeedbackEvent.speech(f"Zoomed, {interval}", time)]

    def split_tap_info(self, pos: tuple[float, float]) -> str:
        """Positional details under the held finger; the edge strips narrate
        the axes themselves."""
        w, h = self.screen
        strip = self.params.axis_strip_px
        if pos[1] >= h - strip:
            x = screen_to_data(pos, self.viewport, self.screen)[0]
            return f"{narration.format_x(self.model, x)}, {self.model.spec.x_label}"
        if pos[0] <= strip:
            y = screen_to_data(pos, self.viewport, self.screen)[1]
            return f"{narration.format_number(y)}, {self.model.spec.y_label}"
        x, y = screen_to_data(pos, self.viewport, self.screen)
        if self.active_series is None:
            name = "Overview"
        else:
            name = self.model.spec.series_names[self.active_series]
        return (f"{narration.format_x(self.model, x)}, "
                f"{narration.format_number(y)}, {name}")

    # ------------------------------------------------------------------
    # mode transition

    def transition_mode(self, time: int) -> list[FeedbackEvent]:
        if self.mode == MODE_SNF:
            self.snf_return_id = self.focus_id
            self.viewport = self._viewport_for_focus(self.focus_id)
            self.mode = MODE_DTM
            self.dtm_touched = False
            self.last_touch_data = None
            self.scan = replace(self.scan, indices_within_radius=frozenset())
            self.lock = dtm.LockState()
            self.slider = dtm.SliderState()
            text = self._narration_text(self.tree.node(self.focus_id),
                                        NavContext(MOVE_NEW))
            return [FeedbackEvent.mode(f"Direct touch mode, {text}", time)]
        landing = self._snf_landing()
        self.mode = MODE_SNF
        self._focus_on(landing)
        text = self._narration_text(self.tree.node(landing),
                                    NavContext(MOVE_NEW))
        return [FeedbackEvent.mode(f"Navigation mode, {text}", time)]

    def _viewport_for_focus(self, node_id: str) -> Viewport:
        full = self.model.full_viewport
        node = self.tree.node(node_id)
        if node.level == LEVEL_POINT:
            p = self.model.points[node.point_id]
            node = self.tree.node(f"xbin:{self.tree.x_bin_index_for(p.x)}")
        elif node.level in (LEVEL_SERIES, LEVEL_CELL):
            node = self.tree.node(self.tree.ancestor_bin(node.id))
        if node.level != LEVEL_BIN:
            return full
        if node.id.startswith("ybin:"):
            ys = [self.model.points[pid].y for pid in node.point_ids]
            lo, hi = (min(ys), max(ys)) if ys else node.y_interval
            if lo >= hi:
                lo, hi = node.y_interval
            return Viewport(full.x_lo, full.x_hi, lo, hi)
        xs = [self.model.points[pid].x for pid in node.point_ids]
        lo, hi = (min(xs), max(xs)) if xs else node.x_interval
        if lo >= hi:
            lo, hi = node.x_interval
        return Viewport(lo, hi, full.y_lo, full.y_hi)

    def _snf_landing(self) -> str:
        ret = self.snf_return_id
        if not self.dtm_touched or self.last_touch_data is None:
            return ret
        node = self.tree.node(ret)
        x, y = self.last_touch_data
        if node.level in (LEVEL_OVERVIEW, LEVEL_ZONE, LEVEL_FILTER):
            return ret
        if node.level == LEVEL_BIN:
            if ret.startswith("ybin:"):
                return f"ybin:{self.tree.y_bin_index_for(y)}"
            return f"xbin:{self.tree.x_bin_index_for(x)}"
        if node.level == LEVEL_SERIES:
            b = self.tree.x_bin_index_for(x)
            return f"xbin:{b}/series:{node.series_index}"
        if node.level == LEVEL_CELL:
            b = self.tree.x_bin_index_for(x)
            c = self.tree.cell_index_for(y)
            return f"xbin:{b}/series:{node.series_index}/cell:{c}"
        # point level: nearest visible point node in the matching context
        parent = self.tree.parent_of(ret)
        if parent == self.tree.zone(ZONE_DATA):
            candidates = self._filtered_children(parent)
        else:
            b = self.tree.x_bin_index_for(x)
            candidates = self._filtered_children(f"xbin:{b}")
            candidates = [c for c in candidates
                          if self.tree.node(c).level == LEVEL_POINT]
        if not candidates:
            return ret
        span_x = self.model.x_range[1] - self.model.x_range[0]
        span_y = self.model.y_range[1] - self.model.y_range[0]

        def distance(cid: str) -> tuple[float, str]:
            p = self.model.points[self.tree.node(cid).point_id]
            return (((p.x - x) / span_x) ** 2 + ((p.y - y) / span_y) ** 2, cid)

        return min(candidates, key=distance)

    # ------------------------------------------------------------------
    # introspection for the harness, server, and tests

    def snapshot(self) -> dict:
        """Chart geometry for a rendering client: screen-space points plus
        the touch regions of the current page."""
        vp = self.viewport if self.mode == MODE_DTM else self.model.full_viewport
        visible = set(self._visible_point_ids()) if self.mode == MODE_DTM else {
            pid for pid, p in enumerate(self.model.points)
            if self.filters[p.series_index]}
        points = []
        for pid, p in enumerate(self.model.points):
            sx, sy = data_to_screen((p.x, p.y), vp, self.screen)
            points.append({"id": pid, "series": p.series_index,
                           "x": sx, "y": sy, "visible": pid in visible})
        regions = []
        if self.mode == MODE_SNF:
            for node_id, rect in self.current_layout().regions:
                node = self.tree.node(node_id)
                regions.append({"node": node_id,
                                "label": narration.node_label(self.tree, node),
                                "rect": list(rect),
                                "focused": node_id == self.focus_id})
        layout = self.current_layout() if self.mode == MODE_SNF else None
        spec = self.model.spec
        return {
            "mode": self.mode,
            "kind": spec.kind,
            "title": spec.title,
            "x_label": spec.x_label,
            "y_label": spec.y_label,
            "series_names": list(spec.series_names),
            "screen": [self.screen[0], self.screen[1]],
            "viewport": [vp.x_lo, vp.x_hi, vp.y_lo, vp.y_hi],
            "page": {"index": self.page_index,
                     "count": layout.page_count if layout else 1},
            "sonification_on": self.sonification_on,
            "active_series": self.active_series,
            "filters": list(self.filters),
            "points": points,
            "regions": regions,
        }

    def snapshot_key(self) -> tuple:
        """Cheap change signature; clients get a fresh snapshot when it moves."""
        return (self.mode, self.tree.parent_of(self.focus_id),
                self.page_index, self.viewport, tuple(self.filters),
                self.active_series)

    def check_invariants(self) -> None:
        """Raise AssertionError when session state went somewhere illegal."""
        assert self.focus_id in self.tree.nodes, "focus must exist"
        layout = self.current_layout()
        assert 0 <= self.page_index < layout.page_count, "page out of range"
        sibs = self._sibling_ids(self.focus_id)
        assert self.focus_id in sibs, "focus filtered out of its level"
        assert any(self.filters), "at least one series must stay visible"
        full = self.model.full_viewport
        eps = 1e-6
        assert (self.viewport.x_lo >= full.x_lo - eps
                and self.viewport.x_hi <= full.x_hi + eps
                and self.viewport.y_lo >= full.y_lo - eps
                and self.viewport.y_hi <= full.y_hi + eps), "viewport escaped"
        if self.mode == MODE_DTM:
            visible = set(self._visible_point_ids())
            assert self.scan.indices_within_radius <= visible, \
                "scan set contains hidden points"
