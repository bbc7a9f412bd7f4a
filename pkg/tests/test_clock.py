import pytest

from netclock.clock import (
    Clock,
    clock_from_dict,
    clock_max,
    clock_min,
    clock_to_dict,
    enumerate_clocks,
    homogeneous_clock,
)


def test_extremes():
    assert clock_max(6).intervals == ((1, 6),)
    assert clock_min(3).intervals == ((1, 1), (2, 2), (3, 3))
    assert clock_max(1) == clock_min(1)


def test_horizon_must_be_positive():
    with pytest.raises(ValueError):
        clock_max(0)


def test_homogeneous_windows():
    assert homogeneous_clock(6, 2).intervals == ((1, 2), (3, 4), (5, 6))
    assert homogeneous_clock(5, 2).intervals == ((1, 2), (3, 4), (5, 5))
    assert homogeneous_clock(4, 10) == clock_max(4)
    with pytest.raises(ValueError):
        homogeneous_clock(4, 0)


def test_interval_of():
    c = Clock(6, (2, 6))  # [1,1], [2,5], [6,6]
    assert c.interval_of(3) == (2, 5)
    assert clock_max(6).interval_of(4) == (1, 6)
    assert clock_min(6).interval_of(4) == (4, 4)
    with pytest.raises(ValueError):
        c.interval_of(7)


def test_remap_time():
    c = Clock(6, (2, 6))
    assert c.remap_time(2) == 2
    assert c.remap_time(5) == 2
    assert [clock_min(4).remap_time(t) for t in range(1, 5)] == [1, 2, 3, 4]
    assert all(clock_max(4).remap_time(t) == 1 for t in range(1, 5))


def test_remap_monotone_and_surjective():
    for boundaries in [(), (2,), (3, 5), (2, 3, 4)]:
        c = Clock(5, boundaries)
        steps = [c.remap_time(t) for t in range(1, 6)]
        assert steps == sorted(steps)
        assert set(steps) == set(range(1, c.n_intervals + 1))


def test_intervals_contiguous_cover():
    c = Clock(9, (3, 4, 8))
    ivs = c.intervals
    assert ivs[0][0] == 1 and ivs[-1][1] == 9
    for prev, cur in zip(ivs, ivs[1:]):
        assert cur[0] == prev[1] + 1
        assert prev[0] <= prev[1]


def test_boundary_positions_validated():
    with pytest.raises(ValueError):
        Clock(5, (1,))
    with pytest.raises(ValueError):
        Clock(5, (6,))


def test_enumerate_counts():
    assert len(list(enumerate_clocks(1))) == 1
    assert len(list(enumerate_clocks(4))) == 8
    assert {c.boundaries for c in enumerate_clocks(3)} == {
        (),
        (2,),
        (3,),
        (2, 3),
    }


def test_enumerate_no_duplicates_up_to_12():
    for T in range(1, 13):
        clocks = list(enumerate_clocks(T))
        assert len(clocks) == 2 ** (T - 1)
        assert len({c.boundaries for c in clocks}) == len(clocks)


def test_enumerate_guard():
    with pytest.raises(ValueError, match="enumeration limit"):
        next(enumerate_clocks(21))


def test_with_cut():
    c = clock_max(4).with_cut(3)
    assert c.boundaries == (3,)
    with pytest.raises(ValueError):
        c.with_cut(3)


def test_json_round_trip():
    c = Clock(7, (3, 6))
    payload = clock_to_dict(c)
    assert payload["boundaries"] == [3, 6]
    assert payload["intervals"] == [[1, 2], [3, 5], [6, 7]]
    assert clock_from_dict(payload) == c
