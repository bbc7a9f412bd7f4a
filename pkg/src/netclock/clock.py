"""Aggregation clocks: contiguous interval partitions of a discrete timeline.

A clock over [1, T] is canonically a sorted set of cut positions drawn from
{2..T}; a cut at position t separates tick t-1 from tick t.  The interval
list is a derived view.  Events inside one interval are treated as
simultaneous by every consumer.
"""
from __future__ import annotations

from bisect import bisect_right
from itertools import combinations
from typing import Iterator

ENUMERATION_HORIZON_LIMIT = 20


class Clock:
    """Immutable partition of the timeline [1, horizon] into intervals."""

    __slots__ = ("horizon", "boundaries", "_intervals")

    def __init__(self, horizon: int, boundaries: tuple[int, ...] = ()):
        if horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon}")
        cuts = tuple(sorted(set(boundaries)))
        for b in cuts:
            if not 2 <= b <= horizon:
                raise ValueError(f"cut position {b} outside [2, {horizon}]")
        self.horizon = horizon
        self.boundaries = cuts
        starts = (1,) + cuts
        ends = tuple(b - 1 for b in cuts) + (horizon,)
        self._intervals = tuple(zip(starts, ends))

    @property
    def intervals(self) -> tuple[tuple[int, int], ...]:
        return self._intervals

    @property
    def n_intervals(self) -> int:
        return len(self.boundaries) + 1

    def interval_of(self, t: int) -> tuple[int, int]:
        """The unique interval containing tick t."""
        return self._intervals[self.remap_time(t) - 1]

    def remap_time(self, t: int) -> int:
        """1-based index of the interval containing tick t."""
        if not 1 <= t <= self.horizon:
            raise ValueError(f"time {t} outside [1, {self.horizon}]")
        return bisect_right(self.boundaries, t) + 1

    def with_cut(self, t: int) -> "Clock":
        if t in self.boundaries:
            raise ValueError(f"position {t} is already a cut")
        return Clock(self.horizon, self.boundaries + (t,))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Clock)
            and self.horizon == other.horizon
            and self.boundaries == other.boundaries
        )

    def __hash__(self) -> int:
        return hash((self.horizon, self.boundaries))

    def __repr__(self) -> str:
        return f"Clock(horizon={self.horizon}, boundaries={list(self.boundaries)})"


def clock_max(horizon: int) -> Clock:
    """Single interval [1, T]: all events simultaneous."""
    return Clock(horizon)


def clock_min(horizon: int) -> Clock:
    """One interval per tick: the original timeline."""
    return Clock(horizon, tuple(range(2, horizon + 1)))


def homogeneous_clock(horizon: int, width: int) -> Clock:
    """Fixed windows of the given width; the last interval may be shorter."""
    if width < 1:
        raise ValueError(f"window width must be >= 1, got {width}")
    return Clock(horizon, tuple(range(1 + width, horizon + 1, width)))


def enumerate_clocks(
    horizon: int, limit: int = ENUMERATION_HORIZON_LIMIT
) -> Iterator[Clock]:
    """Yield all 2^(T-1) clocks over [1, T].

    Ordered by number of cuts, then lexicographically by cut positions, so
    exhaustive searches break ties reproducibly.  Refuses horizons above
    ``limit`` to guard against the exponential blow-up.
    """
    if horizon > limit:
        raise ValueError(
            f"horizon {horizon} exceeds enumeration limit {limit} "
            f"(2^{horizon - 1} clocks)"
        )
    positions = range(2, horizon + 1)
    for k in range(len(positions) + 1):
        for cuts in combinations(positions, k):
            yield Clock(horizon, cuts)


def clock_to_dict(clock: Clock) -> dict:
    return {
        "boundaries": list(clock.boundaries),
        "intervals": [list(iv) for iv in clock.intervals],
    }


def clock_from_dict(payload: dict, horizon: int | None = None) -> Clock:
    if horizon is None:
        horizon = payload["intervals"][-1][1] if payload.get("intervals") else 1
    return Clock(horizon, tuple(payload["boundaries"]))
