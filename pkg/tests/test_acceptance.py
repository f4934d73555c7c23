"""Acceptance suite: one test per release criterion, each printing a PASS
line with the measured evidence.  Run with ``pytest -s`` to see the lines."""

from __future__ import annotations

import random
from datetime import date, timedelta
from fractions import Fraction

import pytest

from charta11y.config import config_hash, load_config
from charta11y.dtm import LOCK_LOCKED, ScanState, scan_update
from charta11y.events import InputEvent
from charta11y.model import ChartSpec, parse_dataset
from charta11y.session import MODE_DTM, MODE_SNF, Session
from charta11y.sonification import (bin_tone_sequence, pitch_for_value,
                                    tone_for_cell)
from charta11y.trace import TraceFile, replay_trace
from charta11y.tree import (GridConfig, build_semantic_tree, hit_test,
                            layout_page)
from conftest import (SAMPLE_DIR, build_model, make_random_events,
                      rising_line_model)
from test_dtm import brute_force_scan


def ev(kind, time=0, **kw):
    return InputEvent(kind, time, **kw)


class TestScanOracleEquivalence:
    """Dynamic-radius scanning must agree exactly with an independent
    brute-force implementation on >= 1000 randomized cases."""

    def test_oracle_equivalence(self):
        rng = random.Random(2024)
        cases = 0
        for _ in range(250):
            cover = rng.randint(1, 8)
            min_rad = rng.uniform(1, 40)
            max_rad = min_rad + rng.uniform(0, 80)
            n_points = rng.randint(0, 50)
            points = [(pid, (rng.uniform(0, 500), rng.uniform(0, 500)))
                      for pid in range(n_points)]
            scan = ScanState(cover, min_rad, max_rad)
            oracle_hits = frozenset()
            for _ in range(5):
                pos = (rng.uniform(0, 500), rng.uniform(0, 500))
                haptics, radius, scan = scan_update(scan, pos, points)
                o_haptics, o_radius, oracle_hits = brute_force_scan(
                    oracle_hits, pos, points, cover, min_rad, max_rad)
                assert haptics == o_haptics
                # oracle uses sqrt-of-squares, engine hypot: 1-ulp slack
                assert radius == pytest.approx(o_radius, rel=1e-12)
                assert scan.indices_within_radius == oracle_hits
                assert min_rad <= radius <= max_rad
                cases += 1
            # stationary repeat always yields zero pulses
            if points:
                pos = points[0][1]
                _, _, scan = scan_update(scan, pos, points)
                haptics, _, _ = scan_update(scan, pos, points)
                assert haptics == 0
        assert cases >= 1000
        print(f"\nPASS scan-oracle-equivalence: {cases} randomized cases, "
              "hit sets and haptic counts identical, radius always clamped")


class TestPenguinGoldenSequence:
    """A series occupying only cells 4-5 of a 7-cell first bin must play
    numb,numb,numb,tone,tone,numb,numb; sequences always span every cell."""

    def test_golden_pattern(self):
        cfg = load_config(SAMPLE_DIR / "cells_demo.config.json")
        from charta11y.config import build_session
        session = build_session(cfg)
        tree = session.tree
        tones = bin_tone_sequence(tree, "xbin:0", 2,
                                  session.params.sonify)
        kinds = ["numb" if t.timbre == "numb" else "tone" for t in tones]
        assert kinds == ["numb"] * 3 + ["tone"] * 2 + ["numb"] * 2
        for bin_id in tree.x_bin_ids():
            for s in range(3):
                assert len(bin_tone_sequence(tree, bin_id, s,
                                             session.params.sonify)) == 7
        print("\nPASS penguin-golden-sequence: first-bin pattern "
              "[numb x3, tone x2, numb x2]; all sequences length 7")


class TestModeTransitionGolden:
    """Focusing a 31-point January bin must zoom direct-touch mode to
    exactly [Jan 1, Jan 31]; the reverse transition restores the focus."""

    def test_january_viewport(self):
        start = date(2021, 11, 15)
        rows = ["date,cases"]
        for i in range(311):
            rows.append(f"{(start + timedelta(days=i)).isoformat()},"
                        f"{100 + (i * 7) % 45}")
        spec = ChartSpec("line", "Daily cases", "Date", "Cases", "temporal",
                         ("WA",), x_column="date", y_column="cases")
        model = parse_dataset("\n".join(rows) + "\n", spec)
        s = Session(model, grid=GridConfig(11, 9), screen=(450, 800))
        s.dispatch(ev("double_tap", 10))
        s.dispatch(ev("double_tap", 20))
        s.dispatch(ev("swipe", 30, direction="right"))
        s.dispatch(ev("swipe", 40, direction="right"))
        bin_node = s.tree.node(s.focus_id)
        assert len(bin_node.point_ids) == 31
        s.dispatch(ev("double_tap_hold_move", 50, direction="hold"))
        assert s.mode == MODE_DTM
        jan1 = float(date(2022, 1, 1).toordinal())
        jan31 = float(date(2022, 1, 31).toordinal())
        assert (s.viewport.x_lo, s.viewport.x_hi) == (jan1, jan31)
        s.dispatch(ev("double_tap_hold_move", 60, direction="hold"))
        assert s.mode == MODE_SNF
        assert s.focus_id == bin_node.id
        print("\nPASS mode-transition-golden: viewport exactly "
              "[Jan 1 2022, Jan 31 2022]; reverse restored focus "
              f"{bin_node.id}")


class TestTilingNoBlankAreas:
    """Every layout tiles the screen exactly and every in-bounds point
    resolves to exactly one node; navigation-mode touches always answer."""

    def _check_layout(self, layout, rng, probes):
        w, h = layout.screen
        rects = [r for _, r in layout.regions]
        area = sum((Fraction(x1) - Fraction(x0)) * (Fraction(y1) - Fraction(y0))
                   for x0, y0, x1, y1 in rects)
        assert area == Fraction(w) * Fraction(h)
        for i in range(len(rects)):
            for j in range(i + 1, len(rects)):
                ax0, ay0, ax1, ay1 = rects[i]
                bx0, by0, bx1, by1 = rects[j]
                ow = min(Fraction(ax1), Fraction(bx1)) - max(Fraction(ax0),
                                                             Fraction(bx0))
                oh = min(Fraction(ay1), Fraction(by1)) - max(Fraction(ay0),
                                                             Fraction(by0))
                assert ow <= 0 or oh <= 0, "region interiors overlap"
        hits = 0
        for _ in range(probes):
            q = (rng.uniform(0, w), rng.uniform(0, h))
            claims = [nid for nid, (x0, y0, x1, y1) in layout.regions
                      if (x0 <= q[0] < x1 or (q[0] == x1 == w))
                      and (y0 <= q[1] < y1 or (q[1] == y1 == h))]
            assert len(claims) == 1
            assert hit_test(layout, q) == claims[0]
            hits += 1
        return hits

    def test_randomized_layouts_and_touch_feedback(self):
        rng = random.Random(7)
        total_probes = 0
        layouts_checked = 0
        while total_probes < 10_000:
            n_pts = rng.randint(1, 120)
            pts = [(rng.uniform(-20, 80), rng.uniform(0, 50),
                    rng.randrange(3)) for _ in range(n_pts)]
            model = build_model(pts, series_names=("a", "b", "c"))
            grid = GridConfig(rng.randint(1, 24), rng.randint(1, 12))
            tree = build_semantic_tree(model, grid)
            screen = (rng.uniform(200, 1200), rng.uniform(200, 1200))
            for parent in ("overview", "zone:x_axis",
                           "xbin:0/series:0", "zone:filters"):
                nodes = [tree.node(c) for c in tree.children_of(parent)]
                if not nodes:
                    continue
                probe = layout_page(nodes, screen, 0, 48)
                for page in range(probe.page_count):
                    layout = layout_page(nodes, screen, page, 48)
                    total_probes += self._check_layout(layout, rng, 40)
                    layouts_checked += 1
            zones = [tree.node(z) for z in tree.children_of("overview")]
            total_probes += self._check_layout(
                layout_page(zones, screen, 0, 48), rng, 40)
            layouts_checked += 1

        # no blank areas: every navigation-mode touch event answers
        s = Session(build_model([(rng.uniform(0, 9), rng.uniform(0, 9),
                                  rng.randrange(3)) for _ in range(50)],
                                series_names=("a", "b", "c")),
                    GridConfig(9, 9), screen=(450, 800))
        t, touches = 0, 0
        for _ in range(400):
            t += 17
            if s.mode != MODE_SNF:
                s.dispatch(ev("double_tap_hold_move", t, direction="hold"))
                t += 17
            kind = rng.choice(["touch_down", "touch_move"])
            pos = (rng.uniform(0, 450), rng.uniform(0, 800))
            feedback = s.dispatch(ev(kind, t, position=pos))
            assert len(feedback) >= 1
            touches += 1
            if rng.random() < 0.1:
                s.dispatch(ev(rng.choice(["double_tap", "z_scrub"]), t + 1))
        print(f"\nPASS tiling-no-blank-areas: {layouts_checked} layouts "
              f"exact-tiled, {total_probes} probes hit exactly one node, "
              f"{touches} SNF touches all answered")


class TestAdaptiveNarration:
    """Adjacent moves speak the Y value first; jumps speak the X value
    first.  X values are < 10 and Y values >= 100, so the leading token
    gives the ordering away."""

    def _first_token(self, text):
        return float(text.split(",")[0])

    def test_random_navigation_sequences(self):
        rng = random.Random(31)
        checked_adjacent = checked_jump = 0
        for _ in range(30):
            model = rising_line_model(9)  # x in 0..8, y in 10..50
            pts = [(i, 100 + 7 * i, 0) for i in range(9)]
            model = build_model(pts, kind="line", series_names=("main",))
            s = Session(model, GridConfig(1, 1), screen=(450, 800))
            s.dispatch(ev("double_tap", 1))
            s.dispatch(ev("double_tap", 2))
            fb = s.dispatch(ev("double_tap", 3))  # drill to first point: jump
            assert self._first_token(fb[0].text) < 10
            checked_jump += 1
            t = 10
            for _ in range(60):
                t += 10
                action = rng.random()
                sibs = s._sibling_ids(s.focus_id)
                idx = sibs.index(s.focus_id)
                if action < 0.5:
                    direction = rng.choice(["left", "right"])
                    target = idx + (1 if direction == "right" else -1)
                    fb = s.dispatch(ev("swipe", t, direction=direction))
                    if 0 <= target < len(sibs):
                        speech = [f for f in fb if f.kind == "speech"]
                        assert self._first_token(speech[0].text) >= 100
                        checked_adjacent += 1
                else:
                    layout = s.current_layout()
                    nid, (x0, y0, x1, y1) = rng.choice(layout.regions)
                    pos = ((x0 + x1) / 2, (y0 + y1) / 2)
                    target_idx = sibs.index(nid)
                    fb = s.dispatch(ev("touch_down", t, position=pos))
                    if nid == sibs[idx]:
                        continue  # repeat, not an ordering probe
                    tok = self._first_token(fb[0].text)
                    if abs(target_idx - idx) == 1:
                        assert tok >= 100
                        checked_adjacent += 1
                    else:
                        assert tok < 10
                        checked_jump += 1
        assert checked_adjacent >= 200 and checked_jump >= 100
        print(f"\nPASS adaptive-narration: {checked_adjacent} adjacent moves "
              f"led with Y, {checked_jump} jumps led with X")


class TestSonificationMonotonicity:
    def test_pitch_and_duration_monotone(self):
        rng = random.Random(6)
        pairs = 0
        for _ in range(1000):
            lo = rng.uniform(-100, 100)
            hi = lo + rng.uniform(0.1, 200)
            v1 = rng.uniform(lo, hi)
            v2 = rng.uniform(lo, hi)
            if v1 == v2:
                continue
            if v1 > v2:
                v1, v2 = v2, v1
            assert pitch_for_value(v1, lo, hi) < pitch_for_value(v2, lo, hi)
            pairs += 1
        assert pairs >= 990
        assert pitch_for_value(0, 0, 1) == 220.0
        assert pitch_for_value(1, 0, 1) == 1760.0
        for max_count in (2, 5, 9, 31):
            durations = [tone_for_cell(c, max_count, 0).duration_ms
                         for c in range(1, max_count + 1)]
            assert all(a < b for a, b in zip(durations, durations[1:]))
        print(f"\nPASS sonification-monotonicity: {pairs} random pairs "
              "strictly increasing; endpoints 220/1760 Hz exact; "
              "cell durations strictly increasing")


class TestDirectionalLock:
    """Scripted strokes over the cell grid: silence for the first three
    cells, lock on the third, step tones only on deviations."""

    def _session(self):
        rng = random.Random(12)
        pts = [(rng.uniform(0, 9), rng.uniform(0, 9), 0) for _ in range(30)]
        s = Session(build_model(pts, series_names=("only",)),
                    GridConfig(9, 7), screen=(450, 800))
        s.dispatch(ev("double_tap_hold_move", 1, direction="hold"))
        assert s.mode == MODE_DTM
        return s

    def _cell_pos(self, s, col, row):
        w, h = s.screen
        return ((col + 0.5) * w / 9, (row + 0.5) * h / 7)

    def _steps(self, feedback):
        out = []
        for fb in feedback:
            if fb.kind == "tone_sequence" and len(fb.tones) == 2 \
                    and all(t.timbre == "earcon" for t in fb.tones):
                pitches = (fb.tones[0].pitch_hz, fb.tones[1].pitch_hz)
                out.append("step_up" if pitches == (880.0, 1175.0)
                           else "step_down")
        return out

    def _stroke(self, s, cells, t0=100):
        tones = []
        for i, (col, row) in enumerate(cells):
            kind = "touch_down" if i == 0 else "touch_move"
            fb = s.dispatch(ev(kind, t0 + 10 * i, position=self._cell_pos(
                s, col, row)))
            tones.append(self._steps(fb))
        s.dispatch(ev("touch_up", t0 + 10 * len(cells),
                      position=self._cell_pos(s, *cells[-1])))
        return tones

    def test_lock_exactly_after_three_and_step_tones(self):
        s = self._session()
        tones = self._stroke(s, [(0, 4), (1, 4), (2, 4), (3, 3)])
        assert tones[0] == [] and tones[1] == []
        assert tones[2] == []  # locking itself is silent
        assert tones[3] == ["step_up"]

        s = self._session()
        tones = self._stroke(s, [(0, 4), (1, 4), (2, 4), (3, 5)])
        assert tones[3] == ["step_down"]

        # two collinear cells then a turn: never locked, never a tone
        s = self._session()
        tones = self._stroke(s, [(0, 4), (1, 4), (1, 5), (2, 5), (2, 4)])
        assert all(t == [] for t in tones)

        # vertical lock with horizontal deviation
        s = self._session()
        tones = self._stroke(s, [(4, 1), (4, 2), (4, 3), (5, 4)])
        assert tones[3] and len(tones[3]) == 1

        print("\nPASS directional-lock: silent lock on the third collinear "
              "cell, step-up/step-down on deviation, no tones pre-lock")

    def test_zero_tones_before_lock_randomized(self):
        rng = random.Random(77)
        for _ in range(40):
            s = self._session()
            locked_seen = False
            cells = [(rng.randrange(9), rng.randrange(7)) for _ in range(25)]
            for i, (col, row) in enumerate(cells):
                kind = "touch_down" if i == 0 else "touch_move"
                was_locked = s.lock.phase == LOCK_LOCKED
                fb = s.dispatch(ev(kind, 100 + 10 * i,
                                   position=self._cell_pos(s, col, row)))
                if self._steps(fb):
                    assert was_locked
                    locked_seen = True
        print("\nPASS directional-lock-random: step tones only ever emitted "
              "from the locked phase")


class TestDeterminism:
    def test_replay_byte_identical_and_fuzz(self):
        cfg = load_config(SAMPLE_DIR / "penguins.config.json")
        rng = random.Random(8)
        events = make_random_events(rng, 2000, screen=(450.0, 800.0))
        trace = TraceFile(config_hash=config_hash(cfg), events=tuple(events))
        first = replay_trace(cfg, trace)
        second = replay_trace(cfg, trace)
        assert first == second

        rng = random.Random(4242)
        pts = [(rng.uniform(0, 30), rng.uniform(0, 30), rng.randrange(3))
               for _ in range(60)]
        s = Session(build_model(pts, series_names=("a", "b", "c")),
                    GridConfig(9, 9), screen=(450, 800))
        fuzz_events = make_random_events(rng, 100_000)
        for i, event in enumerate(fuzz_events):
            feedback = s.dispatch(event)
            assert isinstance(feedback, list)
            if i % 97 == 0:
                s.check_invariants()
        s.check_invariants()
        print("\nPASS determinism: 2000-event replay byte-identical twice; "
              "100000-event fuzz kept every invariant")


class TestThrottle:
    """Throttled slider tones stay >= min_interval apart; the final
    position of every pan still sounds (flushed on touch-up)."""

    def _pan_trace(self, rng, n_pans):
        events = [ev("double_tap_hold_move", 1, direction="hold")]
        t = 10
        for _ in range(n_pans):
            t += rng.randrange(5, 300)
            x = rng.uniform(0, 450)
            events.append(ev("touch_down", t, position=(x, 400.0)))
            for _ in range(rng.randrange(1, 12)):
                t += rng.randrange(0, 60)  # often inside the 80 ms window
                x = min(max(x + rng.uniform(-80, 80), 0), 450)
                events.append(ev("touch_move", t, position=(x, 400.0)))
            t += rng.randrange(0, 40)
            events.append(ev("touch_up", t, position=(x, 400.0)))
        return events

    def test_spacing_and_final_emission(self):
        rng = random.Random(13)
        model = rising_line_model(40)
        s = Session(model, GridConfig(5, 1), screen=(450, 800))
        events = self._pan_trace(rng, 60)
        records = [(e, s.dispatch(e)) for e in events]

        def is_slider_tone(fb):
            return fb.kind == "tone" and fb.tone.timbre.startswith("series")

        min_interval = s.params.min_interval_ms
        # consecutive throttle-gated tones (touch_down/move triggered; the
        # touch-up flush is the sanctioned always-emit exception)
        times = []
        for e, batch in records:
            for fb in batch:
                if is_slider_tone(fb) and e.kind in ("touch_down",
                                                     "touch_move"):
                    times.append(fb.time)
        spacing_ok = all(b - a >= min_interval
                         for a, b in zip(times, times[1:]))
        assert spacing_ok, "throttled tones violated the minimum interval"

        # each pan's final position produced a tone: either its last move
        # emitted, or the touch_up flushed it
        pans = 0
        flushed = 0
        last_payload = None
        for e, batch in records:
            if e.kind in ("touch_down", "touch_move"):
                last_payload = any(is_slider_tone(fb) for fb in batch)
            elif e.kind == "touch_up":
                up_tone = any(is_slider_tone(fb) for fb in batch)
                assert up_tone or last_payload, \
                    "a pan ended without feedback for its final position"
                flushed += 1 if up_tone else 0
                pans += 1
        assert pans == 60
        print(f"\nPASS throttle: {len(times)} slider tones all >= "
              f"{min_interval:.0f} ms apart; {pans} pans all emitted their "
              f"final position ({flushed} via touch-up flush)")
