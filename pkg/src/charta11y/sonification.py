"""Data-to-tone mapping.

Pitch rises exponentially with value (equal value steps sound like equal
musical intervals); scatter cell tones add duration for density; empty cells
get a fixed dull "numb" tone so silence never means ambiguity.  The engine
emits tone *specifications* only — synthesis is the client's job.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ChartModel
from .tree import SemanticTree

TIMBRE_DEFAULT = "default"
TIMBRE_NUMB = "numb"
TIMBRE_EARCON = "earcon"


def series_timbre(series_index: int) -> str:
    return f"series_{series_index}"


@dataclass(frozen=True)
class ToneSpec:
    pitch_hz: float
    duration_ms: float
    timbre: str = TIMBRE_DEFAULT
    gap_after_ms: float = 0.0

    def to_json(self) -> dict:
        return {"pitch_hz": self.pitch_hz, "duration_ms": self.duration_ms,
                "timbre": self.timbre, "gap_after_ms": self.gap_after_ms}

    @classmethod
    def from_json(cls, d: dict) -> "ToneSpec":
        return cls(pitch_hz=float(d["pitch_hz"]),
                   duration_ms=float(d["duration_ms"]),
                   timbre=str(d["timbre"]),
                   gap_after_ms=float(d["gap_after_ms"]))


@dataclass(frozen=True)
class SonifyParams:
    """Tone scale constants.  A3..A6 keeps three octaves inside phone-speaker
    range; a full 9-tone bin stays under four seconds."""

    pitch_lo: float = 220.0
    pitch_hi: float = 1760.0
    dur_lo_ms: float = 80.0
    dur_hi_ms: float = 400.0
    gap_ms: float = 60.0
    numb_pitch: float = 160.0
    numb_duration_ms: float = 40.0
    default_tone_ms: float = 200.0
    point_seq_tone_ms: float = 80.0
    point_seq_gap_ms: float = 30.0


def pitch_for_value(v: float, lo: float, hi: float,
                    params: SonifyParams = SonifyParams()) -> float:
    """Exponential pitch interpolation over [lo, hi]; v is clamped."""
    if hi <= lo:
        return params.pitch_hi if v >= hi else params.pitch_lo
    t = (v - lo) / (hi - lo)
    t = min(max(t, 0.0), 1.0)
    return params.pitch_lo * (params.pitch_hi / params.pitch_lo) ** t


def numb_tone(params: SonifyParams = SonifyParams(),
              gap_after_ms: float = 0.0) -> ToneSpec:
    return ToneSpec(params.numb_pitch, params.numb_duration_ms,
                    TIMBRE_NUMB, gap_after_ms)


def tone_for_cell(count: int, max_count: int, series_index: int,
                  params: SonifyParams = SonifyParams(),
                  gap_after_ms: float = 0.0) -> ToneSpec:
    """Density tone for one cell: pitch and duration grow with count; zero
    count yields the numb tone."""
    if count == 0:
        return numb_tone(params, gap_after_ms)
    pitch = pitch_for_value(count, 1.0, float(max_count), params)
    duration = params.dur_lo_ms + (params.dur_hi_ms - params.dur_lo_ms) * (
        count / max_count)
    return ToneSpec(pitch, duration, series_timbre(series_index), gap_after_ms)


def bin_tone_sequence(tree: SemanticTree, bin_id: str,
                      series_index: int,
                      params: SonifyParams = SonifyParams(),
                      hidden: bool = False) -> list[ToneSpec]:
    """One tone per cell of a bin's series stack, bottom cell first.

    The sequence length always equals the configured cell count; hidden
    series play as all-numb so the rhythm stays recognizable.
    """
    series_node = tree.node(f"{bin_id}/series:{series_index}")
    tones = []
    for cell_id in series_node.children:
        count = 0 if hidden else len(tree.node(cell_id).point_ids)
        tones.append(tone_for_cell(count, tree.max_cell_count, series_index,
                                   params, gap_after_ms=params.gap_ms))
    return tones


def series_overview_tone(series_index: int, model: ChartModel,
                         params: SonifyParams = SonifyParams()) -> ToneSpec:
    """Chart-level series summary: mean-value pitch for line/bar, share-of-
    points pitch/duration (with per-series timbre) for scatter."""
    ys = [p.y for p in model.points if p.series_index == series_index]
    if model.spec.kind == "scatter":
        fraction = len(ys) / len(model.points)
        pitch = pitch_for_value(fraction, 0.0, 1.0, params)
        duration = params.dur_lo_ms + (
            params.dur_hi_ms - params.dur_lo_ms) * fraction
        return ToneSpec(pitch, duration, series_timbre(series_index),
                        params.gap_ms)
    mean = sum(ys) / len(ys) if ys else model.y_range[0]
    pitch = pitch_for_value(mean, model.y_range[0], model.y_range[1], params)
    return ToneSpec(pitch, params.default_tone_ms, TIMBRE_DEFAULT,
                    params.gap_ms)


# Fixed signal tones ("earcons").  Kept inside the audible data scale but
# tagged with their own timbre so clients can voice them distinctly.

def unavailable_earcon() -> ToneSpec:
    return ToneSpec(220.0, 120.0, TIMBRE_EARCON)


def page_change_earcon() -> ToneSpec:
    return ToneSpec(1320.0, 50.0, TIMBRE_EARCON, 40.0)


def step_up_tones() -> list[ToneSpec]:
    return [ToneSpec(880.0, 60.0, TIMBRE_EARCON, 20.0),
            ToneSpec(1175.0, 60.0, TIMBRE_EARCON)]


def step_down_tones() -> list[ToneSpec]:
    return [ToneSpec(1175.0, 60.0, TIMBRE_EARCON, 20.0),
            ToneSpec(880.0, 60.0, TIMBRE_EARCON)]
