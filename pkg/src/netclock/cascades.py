"""Cascade datasets: per-cascade activation records over a shared discrete timeline.

A cascade is a set of (node, time) activations with each node activated at
most once.  Times are normalized at load so the earliest activation in the
dataset sits at t=1; the offset is kept so results can be reported in the
original units.  ``compress_timeline`` additionally drops ticks that carry
no activation anywhere, which is what makes the quadratic/cubic solvers
practical, and keeps the mapping needed to restore output boundaries.
"""
from __future__ import annotations

import gzip
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .clock import Clock
from .graph import Graph


class Activation(NamedTuple):
    node: int
    time: int


@dataclass(frozen=True)
class Cascade:
    """One diffusion episode: activations sorted by (time, node)."""

    id: int
    activations: tuple[Activation, ...]
    time_of: dict[int, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.activations)

    def nodes_at(self, t: int) -> tuple[int, ...]:
        """Nodes activated exactly at tick t."""
        times = [a.time for a in self.activations]
        lo = bisect_left(times, t)
        hi = bisect_right(times, t)
        return tuple(a.node for a in self.activations[lo:hi])

    def nodes_in(self, start: int, end: int) -> set[int]:
        """Union of activations over the ticks start..end inclusive."""
        times = [a.time for a in self.activations]
        lo = bisect_left(times, start)
        hi = bisect_right(times, end)
        return {a.node for a in self.activations[lo:hi]}


@dataclass(frozen=True)
class CascadeSet:
    """All observed cascades plus timeline bookkeeping.

    ``horizon`` is the largest (normalized, possibly compressed) activation
    time; ``time_offset`` restores raw input times (raw = normalized +
    offset); ``original_times[i-1]`` is the pre-compression time of compact
    tick i (None when the timeline was never compressed).
    """

    cascades: tuple[Cascade, ...]
    horizon: int
    total_activations: int
    time_offset: int = 0
    original_times: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        index = {c.id: c for c in self.cascades}
        if len(index) != len(self.cascades):
            raise ValueError("duplicate cascade ids")
        object.__setattr__(self, "_by_id", index)

    def cascade(self, cascade_id: int) -> Cascade:
        try:
            return self._by_id[cascade_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown cascade id {cascade_id}") from None


def load_cascades(
    records: Iterable[tuple[int, int, int]], graph: Graph
) -> CascadeSet:
    """Build a :class:`CascadeSet` from (cascade_id, node, time) records.

    Times are shifted so the earliest activation is 1.  A node activating
    twice within one cascade is rejected (the model activates a vertex at
    most once per cascade); unknown node ids are rejected.
    """
    by_cascade: dict[int, dict[int, int]] = {}
    min_t: int | None = None
    for cid, node, t in records:
        if not 0 <= node < graph.node_count:
            raise ValueError(f"unknown node id {node} in cascade {cid}")
        if t <= 0:
            raise ValueError(f"non-positive time {t} in cascade {cid}")
        times = by_cascade.setdefault(cid, {})
        if node in times:
            raise ValueError(f"node {node} repeated in cascade {cid}")
        times[node] = t
        min_t = t if min_t is None else min(min_t, t)

    offset = (min_t - 1) if min_t is not None else 0
    cascades = []
    horizon = 1
    total = 0
    for cid in sorted(by_cascade):
        acts = tuple(
            sorted(
                (Activation(node, t - offset) for node, t in by_cascade[cid].items()),
                key=lambda a: (a.time, a.node),
            )
        )
        total += len(acts)
        horizon = max(horizon, acts[-1].time)
        cascades.append(
            Cascade(id=cid, activations=acts, time_of={a.node: a.time for a in acts})
        )
    return CascadeSet(
        cascades=tuple(cascades),
        horizon=horizon,
        total_activations=total,
        time_offset=offset,
    )


def compress_timeline(cs: CascadeSet) -> CascadeSet:
    """Drop ticks with no activation anywhere and renumber the rest 1..T'.

    Gaps carry no information for the objective (any cut inside a gap is
    equivalent to the cut at the gap's right edge), so the solvers run on
    the compact timeline.  The compact->original mapping is retained for
    reporting clocks in original coordinates.
    """
    used = sorted({a.time for c in cs.cascades for a in c.activations})
    if not used:
        return CascadeSet(
            cascades=(),
            horizon=1,
            total_activations=0,
            time_offset=cs.time_offset,
            original_times=(1,),
        )
    remap = {t: i + 1 for i, t in enumerate(used)}
    prior = cs.original_times
    original = tuple(prior[t - 1] if prior is not None else t for t in used)
    cascades = []
    for c in cs.cascades:
        acts = tuple(Activation(a.node, remap[a.time]) for a in c.activations)
        cascades.append(
            Cascade(id=c.id, activations=acts, time_of={a.node: a.time for a in acts})
        )
    return CascadeSet(
        cascades=tuple(cascades),
        horizon=len(used),
        total_activations=cs.total_activations,
        time_offset=cs.time_offset,
        original_times=original,
    )


def active_at(cs: CascadeSet, cascade_id: int, interval: tuple[int, int]) -> set[int]:
    """Nodes of one cascade activated within the inclusive interval."""
    start, end = interval
    if start < 1 or end > cs.horizon or start > end:
        raise ValueError(f"interval [{start}, {end}] outside [1, {cs.horizon}]")
    return cs.cascade(cascade_id).nodes_in(start, end)


def original_boundaries(cs: CascadeSet, clock: Clock) -> list[int]:
    """Map a clock's cut positions back to raw input time coordinates."""
    out = []
    for b in clock.boundaries:
        t = cs.original_times[b - 1] if cs.original_times is not None else b
        out.append(t + cs.time_offset)
    return out


def original_intervals(cs: CascadeSet, clock: Clock) -> list[tuple[int, int]]:
    """The clock's intervals in raw time coordinates.

    Cut positions are mapped through the compression table; intervals then
    tile the full raw range, so gaps removed by compression are re-absorbed
    into the interval preceding the cut.
    """
    if cs.original_times is not None:
        lo = cs.original_times[0] + cs.time_offset
        hi = cs.original_times[-1] + cs.time_offset
    else:
        lo = 1 + cs.time_offset
        hi = cs.horizon + cs.time_offset
    cuts = original_boundaries(cs, clock)
    starts = [lo] + cuts
    ends = [c - 1 for c in cuts] + [hi]
    return list(zip(starts, ends))


def write_cascades(cs: CascadeSet, path: str) -> None:
    """Write ``cascade_id<TAB>node<TAB>time`` lines in raw time coordinates."""
    with open(path, "w") as fh:
        for c in cs.cascades:
            for a in c.activations:
                fh.write(f"{c.id}\t{a.node}\t{a.time + cs.time_offset}\n")


def read_cascade_lines(lines: Iterable[str]) -> list[tuple[str, str, int]]:
    """Parse cascade text: ``cascade_id<TAB>node<TAB>time`` per line.

    Comment (``#``) and blank lines are skipped; ids stay strings for the
    caller to remap.
    """
    records: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(
                f"line {lineno}: expected 'cascade<TAB>node<TAB>time', got {raw!r}"
            )
        try:
            t = int(parts[2])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer time {parts[2]!r}") from None
        records.append((parts[0], parts[1], t))
    return records


def read_cascade_file(path: str) -> list[tuple[str, str, int]]:
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt") as fh:  # type: ignore[operator]
        return read_cascade_lines(fh)


def tick_activations(cs: CascadeSet) -> list[list[tuple[int, int]]]:
    """Index activations by tick: entry t-1 lists (cascade_id, node) at tick t."""
    ticks: list[list[tuple[int, int]]] = [[] for _ in range(cs.horizon)]
    for c in cs.cascades:
        for a in c.activations:
            ticks[a.time - 1].append((c.id, a.node))
    return ticks
