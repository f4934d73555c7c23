"""Speech generation: adaptive point labels and the bin/series/cell hierarchy.

All functions are pure; repeat behaviour is driven by a caller-owned cache of
the last utterance per node.  Jumping to a new position leads with the X
value, moving to an adjacent item leads with the Y value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

from .model import ChartModel, DataPoint
from .tree import (SemanticNode, SemanticTree, ZONE_DATA, ZONE_FILTERS,
                   ZONE_X, ZONE_Y)

MOVE_NEW = "new_position"
MOVE_ADJACENT = "adjacent"
MOVE_REPEAT = "repeat"

TIER_ORDER = ("empty", "very_sparse", "sparse", "moderate", "dense", "very_dense")

# Upper fraction bound per non-empty tier; anything above the last bound is
# very_dense.  fraction == 0 is always the empty tier.
_TIER_BOUNDS = (("very_sparse", 0.05), ("sparse", 0.15),
                ("moderate", 0.30), ("dense", 0.50))

_PHRASES = {
    "empty": "no data points",
    "very_sparse": "very sparsely distributed",
    "sparse": "sparsely distributed",
    "moderate": "moderately distributed",
    "dense": "densely distributed",
    "very_dense": "very densely distributed",
}

_MONTHS = ("January", "February", "March", "April", "May", "June", "July",
           "August", "September", "October", "November", "December")

ZONE_NAMES = {
    ZONE_X: "X axis area",
    ZONE_Y: "Y axis area",
    ZONE_DATA: "Data points area",
    ZONE_FILTERS: "Filters area",
}

FILTERS_ACTIVE_SUFFIX = ", filters active"


@dataclass(frozen=True)
class NavContext:
    move_kind: str
    previous_node: str | None = None


@dataclass(frozen=True)
class DensityLabel:
    tier: str
    fraction: float


def density_label(fraction: float) -> DensityLabel:
    if fraction <= 0:
        return DensityLabel("empty", fraction)
    for tier, bound in _TIER_BOUNDS:
        if fraction <= bound:
            return DensityLabel(tier, fraction)
    return DensityLabel("very_dense", fraction)


def density_phrase(fraction: float) -> str:
    return _PHRASES[density_label(fraction).tier]


def format_number(v: float) -> str:
    """At most two decimals, trailing zeros trimmed, no separators."""
    if abs(v - round(v)) < 1e-9:
        return str(int(round(v)))
    text = f"{v:.2f}".rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


def format_date(ordinal: float) -> str:
    d = date.fromordinal(int(ordinal + 0.5) if ordinal >= 0 else int(ordinal - 0.5))
    return f"{_MONTHS[d.month - 1]} {d.day} {d.year}"


def format_x(model: ChartModel, x: float) -> str:
    kind = model.spec.x_kind
    if kind == "temporal":
        return format_date(x)
    if kind == "categorical":
        idx = min(max(int(x + 0.5), 0), len(model.x_categories) - 1)
        return model.x_categories[idx]
    return format_number(x)


def format_x_interval(model: ChartModel, lo: float, hi: float) -> str:
    if model.spec.x_kind == "categorical":
        i = max(math.ceil(lo), 0)
        j = min(math.floor(hi), len(model.x_categories) - 1)
        if i > j:  # interval between category positions
            mid = min(max(int((lo + hi) / 2 + 0.5), 0),
                      len(model.x_categories) - 1)
            return model.x_categories[mid]
        if i == j:
            return model.x_categories[i]
        return f"{model.x_categories[i]} to {model.x_categories[j]}"
    return f"{format_x(model, lo)} to {format_x(model, hi)}"


def format_y_interval(model: ChartModel, lo: float, hi: float) -> str:
    return f"{format_number(lo)} to {format_number(hi)}"


def narrate_point(model: ChartModel, point: DataPoint, ctx: NavContext,
                  last: str | None = None) -> str:
    """Adaptive point label.  ``last`` is the cached utterance used for
    repeat moves."""
    if ctx.move_kind == MOVE_REPEAT and last is not None:
        return last
    x_text = format_x(model, point.x)
    y_text = format_number(point.y)
    series = model.spec.series_names[point.series_index]
    if ctx.move_kind == MOVE_ADJACENT:
        return f"{y_text}, {x_text}, {series}"
    return f"{x_text}, {y_text}, {series}"


def describe_bin(model: ChartModel, node: SemanticNode,
                 total_points: int) -> str:
    count = len(node.point_ids)
    pct = round(100 * count / total_points)
    if node.x_interval is not None:
        interval = format_x_interval(model, *node.x_interval)
    else:
        interval = format_y_interval(model, *node.y_interval)
    return f"{interval}: {pct}% of data points, {density_phrase(count / total_points)}"


def describe_series_in_bin(model: ChartModel, node: SemanticNode,
                           total_points: int) -> str:
    count = len(node.point_ids)
    pct = round(100 * count / total_points)
    name = model.spec.series_names[node.series_index]
    return f"{name}: {pct}% of data points, {density_phrase(count / total_points)}"


def describe_cell(node: SemanticNode, max_cell_count: int) -> str:
    count = len(node.point_ids)
    if count == 0:
        return "no data points"
    unit = "point" if count == 1 else "points"
    return f"{count} {unit}, {density_phrase(count / max_cell_count)}"


def narrate_zone(zone_kind: str) -> str:
    return ZONE_NAMES[zone_kind]


def overview_text(model: ChartModel) -> str:
    spec = model.spec
    names = ", ".join(spec.series_names)
    n = len(spec.series_names)
    return (f"{spec.title}. {spec.kind.capitalize()} chart. "
            f"X axis: {spec.x_label}. Y axis: {spec.y_label}. "
            f"{n} series: {names}")


def filter_node_text(model: ChartModel, series_index: int,
                     visible: bool) -> str:
    name = model.spec.series_names[series_index]
    return f"{name} filter, {'shown' if visible else 'hidden'}"


def node_label(tree: SemanticTree, node: SemanticNode) -> str:
    """Short human-readable label, used by the describe CLI and geometry
    snapshots (not part of the spoken protocol)."""
    model = tree.model
    if node.level == "overview":
        return model.spec.title
    if node.level == "zone":
        return narrate_zone(node.zone_kind)
    if node.level == "bin":
        if node.x_interval is not None:
            return format_x_interval(model, *node.x_interval)
        return format_y_interval(model, *node.y_interval)
    if node.level == "series_in_bin":
        return model.spec.series_names[node.series_index]
    if node.level == "cell":
        return f"cell {node.cell_index}: {len(node.point_ids)} pts"
    if node.level == "filter_toggle":
        return f"{model.spec.series_names[node.series_index]} filter"
    p = model.points[node.point_id]
    return f"{format_x(model, p.x)}, {format_number(p.y)}"
