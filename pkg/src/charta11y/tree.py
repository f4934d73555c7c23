"""Navigable node hierarchy and full-coverage page layouts.

The tree turns a chart into screen-reader-style structure: an overview node,
four zones (x axis, y axis, data points, filters), equal-width bins along
each axis, and — for scatter plots — per-series stacks of density cells
inside each bin.  Layouts tile the whole screen so a finger never lands on a
blank area.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .model import ChartModel

LEVEL_OVERVIEW = "overview"
LEVEL_ZONE = "zone"
LEVEL_BIN = "bin"
LEVEL_SERIES = "series_in_bin"
LEVEL_CELL = "cell"
LEVEL_POINT = "point"
LEVEL_FILTER = "filter_toggle"

ZONE_X = "x_axis"
ZONE_Y = "y_axis"
ZONE_DATA = "data_points"
ZONE_FILTERS = "filters"
ZONE_ORDER = (ZONE_X, ZONE_Y, ZONE_DATA, ZONE_FILTERS)

DEFAULT_MIN_TOUCH_PX = 48.0
DEFAULT_SCATTER_BINS = 9
DEFAULT_CELLS_PER_BIN = 9
MAX_LINE_BINS = 31


@dataclass(frozen=True)
class GridConfig:
    x_bins: int
    y_cells_per_bin: int

    def __post_init__(self) -> None:
        if self.x_bins < 1 or self.y_cells_per_bin < 1:
            raise ValueError("grid counts must be >= 1")


def default_grid(model: ChartModel) -> GridConfig:
    """Grid defaults: 9x9 for scatter; line/bar bin count follows the
    densest series, capped at 31."""
    if model.spec.kind == "scatter":
        return GridConfig(DEFAULT_SCATTER_BINS, DEFAULT_CELLS_PER_BIN)
    per_series: dict[int, int] = {}
    for p in model.points:
        per_series[p.series_index] = per_series.get(p.series_index, 0) + 1
    densest = max(per_series.values())
    return GridConfig(min(densest, MAX_LINE_BINS), DEFAULT_CELLS_PER_BIN)


@dataclass(frozen=True)
class SemanticNode:
    id: str
    level: str
    parent: str | None
    children: tuple[str, ...] = ()
    zone_kind: str | None = None
    x_interval: tuple[float, float] | None = None
    y_interval: tuple[float, float] | None = None
    point_ids: tuple[int, ...] = ()
    series_counts: tuple[int, ...] = ()
    series_index: int | None = None
    point_id: int | None = None
    bin_index: int | None = None
    cell_index: int | None = None


@dataclass(frozen=True)
class SemanticTree:
    model: ChartModel
    grid: GridConfig
    nodes: dict[str, SemanticNode]
    root_id: str
    x_edges: tuple[float, ...]
    y_cell_edges: tuple[float, ...]
    y_bin_edges: tuple[float, ...]
    max_cell_count: int
    max_bin_series_count: int

    def node(self, node_id: str) -> SemanticNode:
        return self.nodes[node_id]

    def children_of(self, node_id: str) -> tuple[str, ...]:
        return self.nodes[node_id].children

    def parent_of(self, node_id: str) -> str | None:
        return self.nodes[node_id].parent

    def zone(self, zone_kind: str) -> str:
        return f"zone:{zone_kind}"

    def x_bin_ids(self) -> tuple[str, ...]:
        return self.nodes[self.zone(ZONE_X)].children

    def x_bin_index_for(self, x: float) -> int:
        return _interval_index(self.x_edges, x)

    def y_bin_index_for(self, y: float) -> int:
        return _interval_index(self.y_bin_edges, y)

    def cell_index_for(self, y: float) -> int:
        return _interval_index(self.y_cell_edges, y)

    def ancestor_bin(self, node_id: str) -> str | None:
        """Nearest enclosing x-axis bin node, if any."""
        cur: str | None = node_id
        while cur is not None:
            node = self.nodes[cur]
            if node.level == LEVEL_BIN and cur.startswith("xbin:"):
                return cur
            cur = node.parent
        return None


def _interval_index(edges: tuple[float, ...], v: float) -> int:
    """Half-open interval lookup: interior boundaries belong to the right
    interval; the top edge belongs to the last one."""
    idx = bisect_right(edges, v) - 1
    return min(max(idx, 0), len(edges) - 2)


def _edges(lo: float, hi: float, n: int) -> tuple[float, ...]:
    span = hi - lo
    edges = [lo + span * i / n for i in range(n + 1)]
    edges[0], edges[n] = lo, hi  # pin endpoints against float drift
    return tuple(edges)


def build_semantic_tree(model: ChartModel, grid: GridConfig) -> SemanticTree:
    """Build the full hierarchy for one chart.

    x-axis bins carry the data drill-down (per-series cell stacks for
    scatter, points sorted by x for line/bar); the y-axis zone mirrors the
    x structure with horizontal value bins; the data-points zone lists every
    point left to right; the filters zone holds one toggle per series.
    """
    spec = model.spec
    n_series = len(spec.series_names)
    x_edges = _edges(model.x_range[0], model.x_range[1], grid.x_bins)
    y_cell_edges = _edges(model.y_range[0], model.y_range[1], grid.y_cells_per_bin)
    y_bin_edges = _edges(model.y_range[0], model.y_range[1], grid.x_bins)

    nodes: dict[str, SemanticNode] = {}

    def add(node: SemanticNode) -> str:
        nodes[node.id] = node
        return node.id

    by_xbin: list[list[int]] = [[] for _ in range(grid.x_bins)]
    by_ybin: list[list[int]] = [[] for _ in range(grid.x_bins)]
    for pid, p in enumerate(model.points):
        by_xbin[_interval_index(x_edges, p.x)].append(pid)
        by_ybin[_interval_index(y_bin_edges, p.y)].append(pid)

    max_cell_count = 0
    max_bin_series_count = 0

    xbin_ids: list[str] = []
    for b in range(grid.x_bins):
        bin_id = f"xbin:{b}"
        pids = by_xbin[b]
        counts = [0] * n_series
        for pid in pids:
            counts[model.points[pid].series_index] += 1
        max_bin_series_count = max(max_bin_series_count, max(counts, default=0))

        child_ids: list[str] = []
        if spec.kind == "scatter":
            for s in range(n_series):
                s_id = f"{bin_id}/series:{s}"
                s_pids = [pid for pid in pids
                          if model.points[pid].series_index == s]
                cell_ids: list[str] = []
                by_cell: list[list[int]] = [[] for _ in range(grid.y_cells_per_bin)]
                for pid in s_pids:
                    by_cell[_interval_index(y_cell_edges, model.points[pid].y)].append(pid)
                for c in range(grid.y_cells_per_bin):
                    cell_id = f"{s_id}/cell:{c}"
                    max_cell_count = max(max_cell_count, len(by_cell[c]))
                    add(SemanticNode(
                        id=cell_id, level=LEVEL_CELL, parent=s_id,
                        x_interval=(x_edges[b], x_edges[b + 1]),
                        y_interval=(y_cell_edges[c], y_cell_edges[c + 1]),
                        point_ids=tuple(by_cell[c]),
                        series_index=s, bin_index=b, cell_index=c))
                    cell_ids.append(cell_id)
                add(SemanticNode(
                    id=s_id, level=LEVEL_SERIES, parent=bin_id,
                    children=tuple(cell_ids),
                    x_interval=(x_edges[b], x_edges[b + 1]),
                    point_ids=tuple(s_pids), series_index=s, bin_index=b))
                child_ids.append(s_id)
        else:
            ordered = sorted(pids, key=lambda pid: (
                model.points[pid].x, model.points[pid].series_index, pid))
            for pid in ordered:
                p = model.points[pid]
                child_ids.append(add(SemanticNode(
                    id=f"{bin_id}/point:{pid}", level=LEVEL_POINT,
                    parent=bin_id, point_ids=(pid,), point_id=pid,
                    series_index=p.series_index, bin_index=b)))

        add(SemanticNode(
            id=bin_id, level=LEVEL_BIN, parent=f"zone:{ZONE_X}",
            children=tuple(child_ids),
            x_interval=(x_edges[b], x_edges[b + 1]),
            point_ids=tuple(pids), series_counts=tuple(counts), bin_index=b))
        xbin_ids.append(bin_id)

    ybin_ids: list[str] = []
    for b in range(grid.x_bins):
        pids = by_ybin[b]
        counts = [0] * n_series
        for pid in pids:
            counts[model.points[pid].series_index] += 1
        ybin_ids.append(add(SemanticNode(
            id=f"ybin:{b}", level=LEVEL_BIN, parent=f"zone:{ZONE_Y}",
            y_interval=(y_bin_edges[b], y_bin_edges[b + 1]),
            point_ids=tuple(pids), series_counts=tuple(counts), bin_index=b)))

    all_sorted = sorted(range(len(model.points)), key=lambda pid: (
        model.points[pid].x, model.points[pid].series_index, pid))
    dpoint_ids = [add(SemanticNode(
        id=f"data/point:{pid}", level=LEVEL_POINT, parent=f"zone:{ZONE_DATA}",
        point_ids=(pid,), point_id=pid,
        series_index=model.points[pid].series_index))
        for pid in all_sorted]

    filter_ids = [add(SemanticNode(
        id=f"filter:{s}", level=LEVEL_FILTER,
        parent=f"zone:{ZONE_FILTERS}", series_index=s))
        for s in range(n_series)]

    zone_children = {
        ZONE_X: tuple(xbin_ids),
        ZONE_Y: tuple(ybin_ids),
        ZONE_DATA: tuple(dpoint_ids),
        ZONE_FILTERS: tuple(filter_ids),
    }
    for kind in ZONE_ORDER:
        add(SemanticNode(
            id=f"zone:{kind}", level=LEVEL_ZONE, parent="overview",
            children=zone_children[kind], zone_kind=kind))

    add(SemanticNode(
        id="overview", level=LEVEL_OVERVIEW, parent=None,
        children=tuple(f"zone:{k}" for k in ZONE_ORDER)))

    return SemanticTree(
        model=model, grid=grid, nodes=nodes, root_id="overview",
        x_edges=x_edges, y_cell_edges=y_cell_edges, y_bin_edges=y_bin_edges,
        max_cell_count=max(max_cell_count, 1),
        max_bin_series_count=max(max_bin_series_count, 1))


Rect = tuple[float, float, float, float]  # x0, y0, x1, y1


@dataclass(frozen=True)
class PageLayout:
    page_index: int
    page_count: int
    per_page: int
    screen: tuple[float, float]
    regions: tuple[tuple[str, Rect], ...]


def _strip_boundaries(extent: float, n: int) -> list[float]:
    bounds = [extent * i / n for i in range(n + 1)]
    bounds[0], bounds[n] = 0.0, extent
    return bounds


def layout_page(nodes: list[SemanticNode], screen: tuple[float, float],
                page_index: int,
                min_touch_px: float = DEFAULT_MIN_TOUCH_PX) -> PageLayout:
    """Tile the screen with touch regions for one page of nodes.

    Zones use a fixed 2x2 quadrant grid; cells stack bottom-to-top; every
    other level lays out as full-height strips left-to-right.  A short last
    page spreads its nodes over the full screen so coverage stays total.
    """
    if not nodes:
        raise ValueError("cannot lay out an empty node list")
    w, h = screen
    level = nodes[0].level

    if level == LEVEL_ZONE:
        if page_index != 0:
            raise ValueError("page_index out of range")
        quadrant = {
            ZONE_Y: (0.0, 0.0, w / 2, h / 2),
            ZONE_DATA: (w / 2, 0.0, w, h / 2),
            ZONE_X: (0.0, h / 2, w / 2, h),
            ZONE_FILTERS: (w / 2, h / 2, w, h),
        }
        regions = tuple((n.id, quadrant[n.zone_kind]) for n in nodes)
        return PageLayout(0, 1, len(nodes), screen, regions)

    vertical = level == LEVEL_CELL
    extent = h if vertical else w
    per_page = max(1, math.floor(extent / min_touch_px))
    page_count = math.ceil(len(nodes) / per_page)
    if not 0 <= page_index < page_count:
        raise ValueError("page_index out of range")
    page_nodes = nodes[page_index * per_page:(page_index + 1) * per_page]
    k = len(page_nodes)
    bounds = _strip_boundaries(extent, k)

    regions = []
    for j, node in enumerate(page_nodes):
        if vertical:
            # first node at the bottom of the screen
            rect = (0.0, bounds[k - 1 - j], w, bounds[k - j])
        else:
            rect = (bounds[j], 0.0, bounds[j + 1], h)
        regions.append((node.id, rect))
    return PageLayout(page_index, page_count, per_page, screen, tuple(regions))


def hit_test(layout: PageLayout, q: tuple[float, float]) -> str:
    """Resolve a screen point to the unique region that claims it.

    Regions are half-open on their right/bottom edges; the screen's own
    right/bottom edge belongs to the region it closes.
    """
    x, y = q
    w, h = layout.screen
    if not (0 <= x <= w and 0 <= y <= h):
        raise ValueError(f"point {q} outside screen {layout.screen}")
    for node_id, (x0, y0, x1, y1) in layout.regions:
        in_x = x0 <= x < x1 or (x == x1 == w)
        in_y = y0 <= y < y1 or (y == y1 == h)
        if in_x and in_y:
            return node_id
    raise AssertionError("tiling failed to cover an in-bounds point")
