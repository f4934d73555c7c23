from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charta11y.model import (ChartSpec, DatasetError, Viewport,
                             data_to_screen, parse_dataset, screen_to_data)

PENGUIN_CSV = """bill_depth_mm,flipper_length_mm,species
18.7,181,Adelie
17.4,186,Adelie
13.2,211,Gentoo
14.1,210,Gentoo
19.5,196,Chinstrap
"""


def scatter_spec(**overrides) -> ChartSpec:
    base = dict(kind="scatter", title="T", x_label="bill_depth_mm",
                y_label="flipper_length_mm", x_kind="numeric",
                series_names=("Adelie", "Chinstrap", "Gentoo"),
                series_column="species")
    base.update(overrides)
    return ChartSpec(**base)


class TestParseDataset:
    def test_penguin_csv_three_series(self):
        model = parse_dataset(PENGUIN_CSV, scatter_spec())
        assert model.spec.kind == "scatter"
        assert len(model.spec.series_names) == 3
        assert len(model.points) == 5
        assert {p.series_index for p in model.points} == {0, 1, 2}

    def test_five_row_padding(self):
        csv = "x,y\n" + "".join(f"{i},{i}\n" for i in range(1, 6))
        spec = ChartSpec("line", "T", "x", "y", "numeric", ("s",))
        model = parse_dataset(csv, spec)
        # oracle: min - 0.05*span, max + 0.05*span with span 4
        lo = 1 - 0.05 * 4
        hi = 5 + 0.05 * 4
        assert model.y_range == (lo, hi)
        assert model.y_range == pytest.approx((0.8, 5.2), abs=1e-12)

    def test_single_row_degenerate_ranges(self):
        csv = "x,y,s\na,1,s1\n"
        spec = ChartSpec("scatter", "T", "x", "y", "categorical", ("s1",),
                         series_column="s")
        model = parse_dataset(csv, spec)
        assert len(model.points) == 1
        # degenerate span rule: span = max(|value|, 1) before the 5% padding
        assert model.x_range == (-0.05, 0.05)
        assert model.y_range == (0.95, 1.05)

    def test_quoted_cells_with_commas(self):
        csv = 'x,y\n"January, 2022",5\n"February, 2022",6\n'
        spec = ChartSpec("bar", "T", "x", "y", "categorical", ("s",))
        model = parse_dataset(csv, spec)
        assert model.x_categories == ("January, 2022", "February, 2022")

    def test_categorical_first_appearance_order(self):
        csv = "x,y\nbanana,1\napple,2\nbanana,3\ncherry,4\n"
        spec = ChartSpec("bar", "T", "x", "y", "categorical", ("s",))
        model = parse_dataset(csv, spec)
        assert model.x_categories == ("banana", "apple", "cherry")
        assert [p.x for p in model.points] == [0.0, 1.0, 0.0, 2.0]

    def test_temporal_x_is_day_ordinal(self):
        csv = "date,y\n2022-01-01,5\n2022-01-31,6\n"
        spec = ChartSpec("line", "T", "date", "y", "temporal", ("s",))
        model = parse_dataset(csv, spec)
        assert model.points[1].x - model.points[0].x == 30.0

    def test_deterministic(self):
        a = parse_dataset(PENGUIN_CSV, scatter_spec())
        b = parse_dataset(PENGUIN_CSV, scatter_spec())
        assert a == b

    def test_empty_dataset_rejected(self):
        with pytest.raises(DatasetError, match="empty dataset"):
            parse_dataset("x,y\n", ChartSpec("line", "T", "x", "y",
                                             "numeric", ("s",)))

    def test_malformed_row_names_line(self):
        csv = "x,y\n1,2\n3\n"
        with pytest.raises(DatasetError, match="line 3"):
            parse_dataset(csv, ChartSpec("line", "T", "x", "y", "numeric",
                                         ("s",)))

    def test_unknown_series_rejected(self):
        csv = "x,y,s\n1,2,mystery\n"
        spec = ChartSpec("scatter", "T", "x", "y", "numeric", ("a", "b"),
                         series_column="s")
        with pytest.raises(DatasetError, match="mystery"):
            parse_dataset(csv, spec)

    def test_empty_cell_rejected(self):
        csv = "x,y\n1,\n"
        with pytest.raises(DatasetError, match="line 2"):
            parse_dataset(csv, ChartSpec("line", "T", "x", "y", "numeric",
                                         ("s",)))

    def test_bad_date_rejected(self):
        csv = "date,y\nnot-a-date,5\n"
        spec = ChartSpec("line", "T", "date", "y", "temporal", ("s",))
        with pytest.raises(DatasetError, match="line 2"):
            parse_dataset(csv, spec)

    def test_missing_column_rejected(self):
        with pytest.raises(DatasetError, match="missing column"):
            parse_dataset("a,b\n1,2\n",
                          ChartSpec("line", "T", "x", "y", "numeric", ("s",)))


class TestChartSpec:
    def test_bar_requires_non_numeric_x(self):
        with pytest.raises(DatasetError):
            ChartSpec("bar", "T", "x", "y", "numeric", ("s",))

    def test_duplicate_series_rejected(self):
        with pytest.raises(DatasetError):
            ChartSpec("line", "T", "x", "y", "numeric", ("a", "a"))

    def test_empty_series_rejected(self):
        with pytest.raises(DatasetError):
            ChartSpec("line", "T", "x", "y", "numeric", ())


class TestTransforms:
    def test_corner_maps_to_corner(self):
        vp = Viewport(0, 1, 0, 1)
        assert data_to_screen((0, 0), vp, (100, 200)) == (0.0, 200.0)

    def test_midpoint(self):
        vp = Viewport(0, 1, 0, 1)
        assert data_to_screen((0.5, 0.5), vp, (100, 200)) == (50.0, 100.0)

    def test_affine_by_hand(self):
        # oracle: sx = (15-10)/10*300 = 150; sy = (4-1)/4*300 = 225
        vp = Viewport(10, 20, 0, 4)
        assert data_to_screen((15, 1), vp, (300, 300)) == (150.0, 225.0)

    def test_inverse_by_hand(self):
        vp = Viewport(10, 20, 0, 4)
        assert screen_to_data((150, 225), vp, (300, 300)) == (15.0, 1.0)

    def test_screen_midpoint_inverse(self):
        vp = Viewport(0, 1, 0, 1)
        assert screen_to_data((50, 100), vp, (100, 200)) == (0.5, 0.5)

    @settings(max_examples=100)
    @given(x=st.floats(10, 20), y=st.floats(0, 4))
    def test_round_trip_identity(self, x, y):
        vp = Viewport(10, 20, 0, 4)
        screen = (317.0, 211.0)
        rx, ry = screen_to_data(data_to_screen((x, y), vp, screen), vp, screen)
        assert rx == pytest.approx(x, rel=1e-9, abs=1e-9)
        assert ry == pytest.approx(y, rel=1e-9, abs=1e-9)

    def test_viewport_requires_extent(self):
        with pytest.raises(ValueError):
            Viewport(1, 1, 0, 2)
