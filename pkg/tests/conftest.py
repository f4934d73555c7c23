from __future__ import annotations

from pathlib import Path

import pytest

from charta11y.model import ChartModel, ChartSpec, DataPoint, _padded_range

SAMPLE_DIR = Path(__file__).resolve().parent.parent / "sample_data"


@pytest.fixture
def sample_dir() -> Path:
    return SAMPLE_DIR


def build_model(points, kind="scatter", x_kind="numeric",
                series_names=("s0",), x_range=None, y_range=None,
                categories=(), title="Chart", x_label="X",
                y_label="Y") -> ChartModel:
    """Construct a model directly (no CSV), with parse-style padded ranges
    unless explicit ranges are given."""
    spec = ChartSpec(kind=kind, title=title, x_label=x_label, y_label=y_label,
                     x_kind=x_kind, series_names=tuple(series_names))
    pts = tuple(DataPoint(float(x), float(y), int(s)) for x, y, s in points)
    if x_range is None:
        x_range = _padded_range([p.x for p in pts], temporal=x_kind == "temporal")
    if y_range is None:
        y_range = _padded_range([p.y for p in pts])
    return ChartModel(spec=spec, points=pts, x_range=tuple(x_range),
                      y_range=tuple(y_range), x_categories=tuple(categories))


def rising_line_model(n=20, series_names=("main",)) -> ChartModel:
    """Line chart with strictly increasing y over x = 0..n-1."""
    return build_model([(i, 10 + 5 * i, 0) for i in range(n)], kind="line",
                       series_names=series_names)


def make_random_events(rng, n, screen=(450.0, 800.0)):
    """Valid random event stream with non-decreasing timestamps."""
    from charta11y.events import InputEvent

    events = []
    t = 0
    down = False
    w, h = screen
    for _ in range(n):
        t += rng.randrange(0, 120)
        pos = (rng.uniform(0, w), rng.uniform(0, h))
        r = rng.random()
        if r < 0.35:
            if down:
                ev = InputEvent("touch_move", t, position=pos)
            else:
                ev = InputEvent("touch_down", t, position=pos)
                down = True
        elif r < 0.45:
            if down:
                ev = InputEvent("touch_up", t, position=pos)
                down = False
            else:
                ev = InputEvent("double_tap", t)
        elif r < 0.55:
            ev = InputEvent("swipe", t,
                            direction=rng.choice(["left", "right", "up",
                                                  "down"]))
        elif r < 0.62:
            ev = InputEvent("double_tap", t)
        elif r < 0.68:
            ev = InputEvent("z_scrub", t)
        elif r < 0.74:
            ev = InputEvent("rotor_rotate", t,
                            direction=rng.choice(["cw", "ccw"]))
        elif r < 0.80:
            ev = InputEvent("rotor_flick", t,
                            direction=rng.choice(["up", "down"]))
        elif r < 0.84:
            ev = InputEvent("three_finger_swipe", t,
                            direction=rng.choice(["left", "right"]))
        elif r < 0.88:
            ev = InputEvent("double_tap_hold_move", t,
                            direction=rng.choice(["up", "down", "left",
                                                  "right", "hold"]))
        elif r < 0.93:
            ev = InputEvent("pinch", t, position=pos,
                            scale=rng.uniform(0.3, 3.5))
        else:
            ev = InputEvent("split_tap", t, position=pos)
        events.append(ev)
    return events
