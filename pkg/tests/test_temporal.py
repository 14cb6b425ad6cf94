from datetime import datetime, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from firecluster.errors import ConfigError, DomainError
from firecluster.temporal import (
    TimeConfig,
    assign_time_index,
    assign_time_indices,
    parse_time_unit,
    window_for,
)

ORIGIN = datetime(2019, 12, 29, 13, 10, 0)


class TestAssignTimeIndex:
    def test_origin_starts_index_one(self):
        assert assign_time_index(ORIGIN, ORIGIN, TimeConfig("h", 1)) == 1

    def test_one_step_later_is_index_two(self):
        # the worked example: 14:10 opens the second hourly interval
        assert assign_time_index(datetime(2019, 12, 29, 14, 10), ORIGIN, TimeConfig("h", 1)) == 2

    def test_within_first_interval(self):
        assert assign_time_index(ORIGIN + timedelta(minutes=59), ORIGIN, TimeConfig("h", 1)) == 1

    def test_half_hour_steps(self):
        # 3.5 h at 30-minute steps: floor(7.0) + 1
        cfg = TimeConfig("m", 30)
        assert assign_time_index(ORIGIN + timedelta(hours=3, minutes=30), ORIGIN, cfg) == 8

    def test_before_origin_rejected(self):
        with pytest.raises(DomainError):
            assign_time_index(ORIGIN - timedelta(seconds=1), ORIGIN, TimeConfig())

    @settings(max_examples=50, deadline=None)
    @given(
        offsets=st.lists(st.integers(0, 10**6), min_size=2, max_size=20),
        step=st.sampled_from([1.0, 0.5, 2.0]),
        unit=st.sampled_from(["m", "h"]),
    )
    def test_monotone_in_time(self, offsets, step, unit):
        cfg = TimeConfig(unit, step)
        offsets = sorted(offsets)
        idx = [assign_time_index(ORIGIN + timedelta(seconds=o), ORIGIN, cfg) for o in offsets]
        assert idx == sorted(idx)
        assert idx[0] >= 1

    def test_vectorized_matches_scalar(self):
        cfg = TimeConfig("h", 1)
        offsets = [0, 59 * 60, 3600, 3601, 7200, 86400]
        times = np.array([np.datetime64(ORIGIN, "s") + np.timedelta64(o, "s") for o in offsets])
        vec = assign_time_indices(times, ORIGIN, cfg)
        scalar = [assign_time_index(ORIGIN + timedelta(seconds=o), ORIGIN, cfg) for o in offsets]
        assert vec.tolist() == scalar

    def test_vectorized_rejects_pre_origin(self):
        times = np.array([np.datetime64(ORIGIN, "s") - np.timedelta64(1, "s")])
        with pytest.raises(DomainError):
            assign_time_indices(times, ORIGIN, TimeConfig())


class TestTimeConfig:
    def test_unit_aliases(self):
        assert parse_time_unit("hours") == "h"
        assert parse_time_unit("MIN") == "m"
        assert TimeConfig("days", 1).unit == "d"

    def test_bad_unit_rejected(self):
        with pytest.raises(ConfigError):
            parse_time_unit("fortnight")

    def test_nonpositive_step_rejected(self):
        with pytest.raises(ConfigError):
            TimeConfig("h", 0)

    def test_index_seconds(self):
        assert TimeConfig("h", 1).index_seconds == 3600.0
        assert TimeConfig("m", 30).index_seconds == 1800.0


class TestWindowFor:
    def test_first_window(self):
        w = window_for(1, 24)
        assert (w.lo, w.hi) == (1, 1)

    def test_window_past_active_time(self):
        w = window_for(26, 24)
        assert (w.lo, w.hi) == (2, 26)

    def test_lower_bound_clamps(self):
        w = window_for(10, 24)
        assert (w.lo, w.hi) == (1, 10)

    def test_invalid_rejected(self):
        with pytest.raises(DomainError):
            window_for(0, 24)
        with pytest.raises(DomainError):
            window_for(3, -1)

    def test_consecutive_windows_advance(self):
        prev = window_for(1, 5)
        for t in range(2, 40):
            w = window_for(t, 5)
            assert w.hi == prev.hi + 1
            assert w.lo - prev.lo in (0, 1)
            prev = w

    def test_membership_range(self):
        # index k is visible in windows S_k .. S_{k+activeTime} and no others
        active = 4
        k = 7
        for t in range(1, 30):
            w = window_for(t, active)
            visible = w.lo <= k <= w.hi
            assert visible == (k <= t <= k + active)
