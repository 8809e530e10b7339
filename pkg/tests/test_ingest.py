import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from tiledrqa import (ColumnOutOfRange, EmptySeries, FileNotReadable,
                      InvalidArgument, ParseError, TimeSeries, generate_sine,
                      read_column)


def write(tmp_path, text, name="data.txt"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestReadColumn:
    def test_comma_column_with_offset(self, tmp_path):
        path = write(tmp_path, "a,1\nb,2\nc,3")
        assert read_column(path, ",", 1, 1).values.tolist() == [2.0, 3.0]

    def test_semicolon_first_column(self, tmp_path):
        path = write(tmp_path, "1;2\n3;4")
        assert read_column(path, ";", 0, 0).values.tolist() == [1.0, 3.0]

    def test_non_numeric_token_is_an_error(self, tmp_path):
        path = write(tmp_path, "x,y\n1,M\n2,5")
        with pytest.raises(ParseError) as err:
            read_column(path, ",", 1, 1)
        assert err.value.row == 2
        assert err.value.token == "M"

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotReadable):
            read_column(tmp_path / "absent.csv", ",", 0, 0)

    def test_short_row(self, tmp_path):
        path = write(tmp_path, "1,2\n3\n4,5")
        with pytest.raises(ColumnOutOfRange) as err:
            read_column(path, ",", 1, 0)
        assert err.value.row == 2

    def test_offset_eats_everything(self, tmp_path):
        path = write(tmp_path, "1\n2\n3")
        with pytest.raises(EmptySeries):
            read_column(path, ",", 0, 3)

    def test_blank_rows_are_skipped_and_do_not_count(self, tmp_path):
        path = write(tmp_path, "\n1,9\n\n2,8\n\n")
        series = read_column(path, ",", 0, 1)
        assert series.values.tolist() == [2.0]

    def test_whitespace_around_tokens(self, tmp_path):
        path = write(tmp_path, " 1.5 ,\t2.5 \n 3.5,4.5")
        assert read_column(path, ",", 1, 0).values.tolist() == [2.5, 4.5]

    def test_crlf_rows(self, tmp_path):
        path = tmp_path / "crlf.txt"
        path.write_bytes(b"1,2\r\n3,4\r\n")
        assert read_column(path, ",", 1, 0).values.tolist() == [2.0, 4.0]

    def test_skip_invalid_drops_and_reports(self, tmp_path):
        path = write(tmp_path, "1\nM-missing\n2\nshort\n3")
        series = read_column(path, ",", 0, 0, skip_invalid=True)
        assert series.values.tolist() == [1.0, 2.0, 3.0]
        assert series.skipped_rows == 2

    def test_nan_and_inf_tokens_rejected(self, tmp_path):
        path = write(tmp_path, "nan\n1.0")
        with pytest.raises(ParseError):
            read_column(path, ",", 0, 0)
        path = write(tmp_path, "inf\n1.0", name="inf.txt")
        with pytest.raises(ParseError):
            read_column(path, ",", 0, 0)

    def test_bad_arguments(self, tmp_path):
        path = write(tmp_path, "1,2")
        with pytest.raises(InvalidArgument):
            read_column(path, ",,", 0, 0)
        with pytest.raises(InvalidArgument):
            read_column(path, ",", -1, 0)
        with pytest.raises(InvalidArgument):
            read_column(path, ",", 0, -2)

    @hsettings(max_examples=40, deadline=None)
    @given(
        table=st.lists(
            st.lists(st.integers(-999, 999).map(float), min_size=2, max_size=4),
            min_size=1, max_size=12),
        offset=st.integers(0, 13),
    )
    def test_offset_equals_dropping_prefix(self, tmp_path_factory, table,
                                            offset, ):
        width = min(len(row) for row in table)
        path = tmp_path_factory.mktemp("prop") / "t.csv"
        path.write_text("\n".join(",".join(str(v) for v in row[:width])
                                  for row in table))
        full = read_column(path, ",", width - 1, 0).values
        if offset >= len(table):
            with pytest.raises(EmptySeries):
                read_column(path, ",", width - 1, offset)
        else:
            shifted = read_column(path, ",", width - 1, offset).values
            assert shifted.tolist() == full[offset:].tolist()


class TestGenerateSine:
    def test_million_point_series_endpoints(self):
        series = generate_sine(1_000_001, 1000 * math.pi)
        assert series.values[0] == 0.0
        assert abs(series.values[-1]) < 1e-9
        assert len(series) == 1_000_001

    def test_three_points_over_pi(self):
        series = generate_sine(3, math.pi)
        assert series.values[0] == 0.0
        assert series.values[1] == pytest.approx(1.0, abs=1e-15)
        assert abs(series.values[2]) < 1e-12

    def test_degenerate_constant(self):
        assert generate_sine(2, 0.0).values.tolist() == [0.0, 0.0]

    def test_too_few_points(self):
        with pytest.raises(InvalidArgument):
            generate_sine(1, 1.0)

    @hsettings(max_examples=25, deadline=None)
    @given(n=st.integers(2, 2000), k=st.floats(0, 500, allow_nan=False))
    def test_values_bounded(self, n, k):
        values = generate_sine(n, k * math.pi).values
        assert np.all(values >= -1.0)
        assert np.all(values <= 1.0)


class TestTimeSeries:
    def test_rejects_non_finite(self):
        with pytest.raises(InvalidArgument):
            TimeSeries(np.array([1.0, np.nan]))
        with pytest.raises(InvalidArgument):
            TimeSeries(np.array([np.inf]))

    def test_is_read_only(self):
        series = TimeSeries(np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            series.values[0] = 5.0

    def test_length(self):
        series = TimeSeries([1.0, 2.0, 3.0])
        assert len(series) == 3
        assert series.length == 3
