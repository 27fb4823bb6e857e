import pytest

from pmiris.errors import GazeOrderingError, GazeParseError
from pmiris.gaze import parse_gaze_log, parse_transform


def test_two_valid_rows():
    samples = parse_gaze_log("0,960.0,540.0,1\n33,962.5,538.0,1")
    assert len(samples) == 2
    assert samples[0].t == 0 and samples[1].t == 33
    assert all(s.valid for s in samples)


def test_empty_input():
    assert parse_gaze_log("") == []


def test_non_numeric_row_names_line():
    with pytest.raises(GazeParseError) as exc:
        parse_gaze_log("33,a,b,1")
    assert exc.value.line_no == 1


def test_wrong_column_count():
    with pytest.raises(GazeParseError) as exc:
        parse_gaze_log("0,1.0,2.0,1\n10,5.0,1")
    assert exc.value.line_no == 2


def test_header_is_skipped():
    samples = parse_gaze_log("t_ms,x,y,valid\n0,1.0,2.0,1")
    assert len(samples) == 1


def test_invalid_flag_rows_retained():
    samples = parse_gaze_log("0,1.0,2.0,0\n10,3.0,4.0,1")
    assert [s.valid for s in samples] == [False, True]


def test_time_regression_rejected():
    with pytest.raises(GazeOrderingError) as exc:
        parse_gaze_log("100,1,2,1\n50,1,2,1")
    assert exc.value.line_no == 2


def test_equal_timestamps_allowed():
    assert len(parse_gaze_log("5,1,2,1\n5,1,2,1")) == 2


def test_negative_timestamp_rejected():
    with pytest.raises(GazeParseError):
        parse_gaze_log("-1,1,2,1")


def test_bad_valid_flag_rejected():
    with pytest.raises(GazeParseError):
        parse_gaze_log("0,1,2,yes")


def test_parse_transform_keyvalue():
    t = parse_transform("offset_x = 100\noffset_y: 150\nscale = 2.0\nwidth = 300\nheight = 300\n")
    assert t.offset_x == 100 and t.scale == 2.0 and t.width == 300
    u, v = t.to_image(100 + 2.0 * 10, 150 + 2.0 * 20)
    assert (u, v) == (10, 20)
    assert t.to_screen(10, 20) == (120, 190)


def test_parse_transform_missing_field():
    with pytest.raises(ValueError):
        parse_transform("offset_x = 1\nscale = 2\nwidth = 10\nheight = 10")
