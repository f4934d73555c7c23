"""Chart data model: CSV ingestion plus data-space/screen-space transforms.

The model is the single source of truth for every interaction mode.  It is
immutable after construction and safe to share across sessions.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import date

CHART_KINDS = ("line", "bar", "scatter")
X_KINDS = ("numeric", "temporal", "categorical")

# Fraction of the raw span added on each side of the data range so edge
# points never sit flush against the screen border.
PAD_FRACTION = 0.05


class DatasetError(ValueError):
    """A CSV dataset or chart spec cannot be turned into a usable model."""


@dataclass(frozen=True)
class ChartSpec:
    """Describes how a dataset should be read and presented.

    ``x_column``/``y_column``/``series_column`` name the CSV columns; when
    omitted they default to the axis labels (and ``series_column`` to
    ``"series"`` for multi-series charts).
    """

    kind: str
    title: str
    x_label: str
    y_label: str
    x_kind: str
    series_names: tuple[str, ...]
    x_column: str | None = None
    y_column: str | None = None
    series_column: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in CHART_KINDS:
            raise DatasetError(f"unknown chart kind {self.kind!r}")
        if self.x_kind not in X_KINDS:
            raise DatasetError(f"unknown x kind {self.x_kind!r}")
        if not self.series_names:
            raise DatasetError("series_names must not be empty")
        if len(set(self.series_names)) != len(self.series_names):
            raise DatasetError("series_names must be pairwise distinct")
        if self.kind == "bar" and self.x_kind == "numeric":
            raise DatasetError("bar charts require categorical or temporal x")

    @property
    def x_col(self) -> str:
        return self.x_column or self.x_label

    @property
    def y_col(self) -> str:
        return self.y_column or self.y_label

    @property
    def series_col(self) -> str:
        return self.series_column or "series"


@dataclass(frozen=True)
class DataPoint:
    """One observation.  ``x`` is an ordinal index for categorical/temporal
    axes (temporal: proleptic day ordinal of the date)."""

    x: float
    y: float
    series_index: int


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned window in data space."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self) -> None:
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError("viewport must have positive extent")

    def contains(self, x: float, y: float) -> bool:
        return self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi


@dataclass(frozen=True)
class ChartModel:
    """Parsed dataset with padded axis ranges.

    ``x_categories`` holds the category labels in ordinal order when
    ``spec.x_kind == "categorical"``; otherwise it is empty.
    """

    spec: ChartSpec
    points: tuple[DataPoint, ...]
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    x_categories: tuple[str, ...] = field(default=())

    @property
    def full_viewport(self) -> Viewport:
        return Viewport(self.x_range[0], self.x_range[1],
                        self.y_range[0], self.y_range[1])

    def series_points(self, series_index: int) -> list[int]:
        """Point ids (indices into ``points``) of one series, in file order."""
        return [i for i, p in enumerate(self.points)
                if p.series_index == series_index]


def _padded_range(values: list[float], temporal: bool = False) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    span = hi - lo
    if span == 0:
        # Degenerate/all-equal column: synthesize a span so the padded range
        # still has extent.  Day ordinals are huge, so temporal axes use one
        # day instead of the magnitude rule.
        span = 1.0 if temporal else max(abs(lo), 1.0)
    pad = PAD_FRACTION * span
    return (lo - pad, hi + pad)


def parse_dataset(csv_text: str, spec: ChartSpec) -> ChartModel:
    """Parse comma-separated UTF-8 text (first row = header) into a model.

    Categorical and temporal x values become ordinals; ranges get a 5%
    padding margin per side.  Rows with missing or malformed cells are
    rejected with the offending CSV line number.
    """
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty dataset") from None

    col_index = {name.strip(): i for i, name in enumerate(header)}
    multi = len(spec.series_names) > 1 or spec.series_column is not None

    def col(name: str) -> int:
        if name not in col_index:
            raise DatasetError(f"missing column {name!r} in CSV header")
        return col_index[name]

    xi, yi = col(spec.x_col), col(spec.y_col)
    si = col(spec.series_col) if multi else None
    series_of = {name: k for k, name in enumerate(spec.series_names)}

    points: list[DataPoint] = []
    categories: list[str] = []
    cat_to_ordinal: dict[str, int] = {}

    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue  # tolerate blank lines
        needed = max(xi, yi, si if si is not None else 0)
        if len(row) <= needed:
            raise DatasetError(f"malformed CSV row at line {line_no}")
        x_raw, y_raw = row[xi].strip(), row[yi].strip()
        if not x_raw or not y_raw:
            raise DatasetError(f"empty cell at line {line_no}")

        if spec.x_kind == "numeric":
            try:
                x = float(x_raw)
            except ValueError:
                raise DatasetError(
                    f"bad numeric x value {x_raw!r} at line {line_no}") from None
        elif spec.x_kind == "temporal":
            try:
                x = float(date.fromisoformat(x_raw).toordinal())
            except ValueError:
                raise DatasetError(
                    f"bad ISO date {x_raw!r} at line {line_no}") from None
        else:
            if x_raw not in cat_to_ordinal:
                cat_to_ordinal[x_raw] = len(categories)
                categories.append(x_raw)
            x = float(cat_to_ordinal[x_raw])

        try:
            y = float(y_raw)
        except ValueError:
            raise DatasetError(
                f"bad numeric y value {y_raw!r} at line {line_no}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DatasetError(f"non-finite value at line {line_no}")

        if si is not None:
            name = row[si].strip()
            if name not in series_of:
                raise DatasetError(
                    f"unknown series value {name!r} at line {line_no}")
            k = series_of[name]
        else:
            k = 0
        points.append(DataPoint(x=x, y=y, series_index=k))

    if not points:
        raise DatasetError("empty dataset")

    temporal = spec.x_kind == "temporal"
    x_range = _padded_range([p.x for p in points], temporal=temporal)
    y_range = _padded_range([p.y for p in points])
    return ChartModel(spec=spec, points=tuple(points), x_range=x_range,
                      y_range=y_range, x_categories=tuple(categories))


def data_to_screen(p: tuple[float, float], vp: Viewport,
                   screen: tuple[float, float]) -> tuple[float, float]:
    """Map a data-space point to logical pixels (origin top-left, y down)."""
    w, h = screen
    sx = (p[0] - vp.x_lo) / (vp.x_hi - vp.x_lo) * w
    sy = (vp.y_hi - p[1]) / (vp.y_hi - vp.y_lo) * h
    return (sx, sy)


def screen_to_data(q: tuple[float, float], vp: Viewport,
                   screen: tuple[float, float]) -> tuple[float, float]:
    """Inverse of :func:`data_to_screen`."""
    w, h = screen
    x = vp.x_lo + q[0] / w * (vp.x_hi - vp.x_lo)
    y = vp.y_hi - q[1] / h * (vp.y_hi - vp.y_lo)
    return (x, y)
