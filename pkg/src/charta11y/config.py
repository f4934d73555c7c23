"""Session configuration documents.

A config is a strict JSON document (unknown keys rejected, versioned) naming
the CSV, the chart spec, and every tunable constant.  Traces carry the
config's hash so a replay cannot silently run against the wrong setup.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .model import ChartSpec, parse_dataset
from .session import EngineParams, Session
from .sonification import SonifyParams
from .tree import GridConfig, default_grid

FORMAT_VERSION = 1


class ConfigError(ValueError):
    """The configuration document is malformed."""


@dataclass(frozen=True)
class SessionConfig:
    csv_path: str
    spec: ChartSpec
    x_bins: int | None
    y_cells_per_bin: int
    screen: tuple[float, float]
    params: EngineParams
    base_dir: Path


_ENGINE_KEYS = {
    "min_touch_px": float, "radius_cover_distance": int, "min_rad": float,
    "max_rad": float, "hit_tolerance_px": float, "min_interval_ms": float,
    "axis_strip_px": float,
}

_SONIFY_KEYS = {
    "pitch_lo": float, "pitch_hi": float, "dur_lo_ms": float,
    "dur_hi_ms": float, "gap_ms": float, "numb_pitch": float,
    "numb_duration_ms": float, "default_tone_ms": float,
    "point_seq_tone_ms": float, "point_seq_gap_ms": float,
}

_CHART_KEYS = ("kind", "title", "x_label", "y_label", "x_kind",
               "series_names", "x_column", "y_column", "series_column")


def _check_keys(d: dict, allowed, where: str) -> None:
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")


def _typed(d: dict, key: str, conv, where: str, default=None):
    if key not in d or d[key] is None:
        return default
    try:
        return conv(d[key])
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {where}.{key}: {d[key]!r}") from None


def parse_config(doc: dict, base_dir: Path) -> SessionConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys(doc, ("format_version", "csv_path", "chart", "grid",
                      "screen", "engine", "sonification"), "config")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ConfigError(f"unsupported config format_version {version!r}")
    if "csv_path" not in doc or "chart" not in doc:
        raise ConfigError("config requires csv_path and chart")

    chart = doc["chart"]
    if not isinstance(chart, dict):
        raise ConfigError("chart must be an object")
    _check_keys(chart, _CHART_KEYS, "chart")
    for required in ("kind", "title", "x_label", "y_label", "x_kind",
                     "series_names"):
        if required not in chart:
            raise ConfigError(f"chart.{required} is required")
    names = chart["series_names"]
    if (not isinstance(names, list)
            or not all(isinstance(n, str) for n in names)):
        raise ConfigError("chart.series_names must be a list of strings")
    try:
        spec = ChartSpec(
            kind=str(chart["kind"]), title=str(chart["title"]),
            x_label=str(chart["x_label"]), y_label=str(chart["y_label"]),
            x_kind=str(chart["x_kind"]), series_names=tuple(names),
            x_column=chart.get("x_column"), y_column=chart.get("y_column"),
            series_column=chart.get("series_column"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    grid = doc.get("grid") or {}
    _check_keys(grid, ("x_bins", "y_cells_per_bin"), "grid")
    x_bins = _typed(grid, "x_bins", int, "grid")
    y_cells = _typed(grid, "y_cells_per_bin", int, "grid", default=9)
    if x_bins is not None and x_bins < 1 or y_cells < 1:
        raise ConfigError("grid counts must be >= 1")

    screen = doc.get("screen") or {}
    _check_keys(screen, ("width", "height"), "screen")
    width = _typed(screen, "width", float, "screen", default=390.0)
    height = _typed(screen, "height", float, "screen", default=844.0)
    if width <= 0 or height <= 0:
        raise ConfigError("screen dimensions must be positive")

    engine = doc.get("engine") or {}
    _check_keys(engine, _ENGINE_KEYS, "engine")
    engine_kwargs = {k: _typed(engine, k, conv, "engine")
                     for k, conv in _ENGINE_KEYS.items() if k in engine}

    sonify = doc.get("sonification") or {}
    _check_keys(sonify, _SONIFY_KEYS, "sonification")
    sonify_kwargs = {k: _typed(sonify, k, conv, "sonification")
                     for k, conv in _SONIFY_KEYS.items() if k in sonify}

    params = EngineParams(**engine_kwargs, sonify=SonifyParams(**sonify_kwargs))
    return SessionConfig(csv_path=str(doc["csv_path"]), spec=spec,
                         x_bins=x_bins, y_cells_per_bin=y_cells,
                         screen=(width, height), params=params,
                         base_dir=base_dir)


def load_config(path: str | Path) -> SessionConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    return parse_config(doc, path.parent)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True)


def config_dict(cfg: SessionConfig) -> dict:
    """Normalized config with every default materialized, so the hash does
    not depend on which values were spelled out."""
    spec, p, s = cfg.spec, cfg.params, cfg.params.sonify
    return {
        "format_version": FORMAT_VERSION,
        "csv_path": cfg.csv_path,
        "chart": {
            "kind": spec.kind, "title": spec.title, "x_label": spec.x_label,
            "y_label": spec.y_label, "x_kind": spec.x_kind,
            "series_names": list(spec.series_names),
            "x_column": spec.x_col, "y_column": spec.y_col,
            "series_column": spec.series_col,
        },
        "grid": {"x_bins": cfg.x_bins, "y_cells_per_bin": cfg.y_cells_per_bin},
        "screen": {"width": cfg.screen[0], "height": cfg.screen[1]},
        "engine": {
            "min_touch_px": p.min_touch_px,
            "radius_cover_distance": p.radius_cover_distance,
            "min_rad": p.min_rad, "max_rad": p.max_rad,
            "hit_tolerance_px": p.hit_tolerance_px,
            "min_interval_ms": p.min_interval_ms,
            "axis_strip_px": p.axis_strip_px,
        },
        "sonification": {
            "pitch_lo": s.pitch_lo, "pitch_hi": s.pitch_hi,
            "dur_lo_ms": s.dur_lo_ms, "dur_hi_ms": s.dur_hi_ms,
            "gap_ms": s.gap_ms, "numb_pitch": s.numb_pitch,
            "numb_duration_ms": s.numb_duration_ms,
            "default_tone_ms": s.default_tone_ms,
            "point_seq_tone_ms": s.point_seq_tone_ms,
            "point_seq_gap_ms": s.point_seq_gap_ms,
        },
    }


def config_hash(cfg: SessionConfig) -> str:
    return hashlib.sha256(
        canonical_json(config_dict(cfg)).encode("utf-8")).hexdigest()


def build_session(cfg: SessionConfig) -> Session:
    csv_file = cfg.base_dir / cfg.csv_path
    try:
        text = csv_file.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read dataset {csv_file}: {exc}") from None
    model = parse_dataset(text, cfg.spec)
    x_bins = cfg.x_bins if cfg.x_bins is not None else default_grid(model).x_bins
    grid = GridConfig(x_bins, cfg.y_cells_per_bin)
    return Session(model, grid=grid, screen=cfg.screen, params=cfg.params)
