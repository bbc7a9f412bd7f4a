"""Cascade log-likelihood under an aggregation clock, and its improvements.

All values are natural-log units.  The likelihood of a dataset under a
clock decomposes over consecutive interval pairs: an activation during
interval i is explained by its in-neighbors activated during interval i-1
(its "contagious" neighbors); a node that stays inactive through interval i
while having contagious neighbors incurs a non-activation term.

Non-activation terms are controlled by a policy:

* ``"contagious_only"`` (default): count a non-activation term only for
  (node, interval) pairs with at least one contagious neighbor.  Terms with
  no contagious neighbor would add a constant per node per interval that
  penalizes finer clocks independently of structure.
* ``"full"``: every not-yet-activated node contributes at every interval.
* ``"none"``: activation terms only.

Improvements are measured against the single-interval clock, under which
every activation is spontaneous.
"""
from __future__ import annotations

import math
import warnings
from bisect import bisect_right
from dataclasses import dataclass

from .cascades import Cascade, CascadeSet
from .clock import Clock, clock_max
from .graph import Graph

POLICIES = ("none", "contagious_only", "full")


@dataclass(frozen=True)
class ICParams:
    """Independent-cascade probabilities.

    ``p_n``: a newly activated node activates a neighbor in the next step.
    ``p_e``: an inactive node activates spontaneously (external sources).
    """

    p_e: float = 0.001
    p_n: float = 0.1

    def __post_init__(self) -> None:
        if not 0.0 < self.p_e < 1.0:
            raise ValueError(f"p_e must be in (0, 1), got {self.p_e}")
        if not 0.0 < self.p_n < 1.0:
            raise ValueError(f"p_n must be in (0, 1), got {self.p_n}")
        if self.p_e >= self.p_n:
            warnings.warn(
                f"p_e={self.p_e} >= p_n={self.p_n}: network structure has "
                "little effect on the objective",
                stacklevel=2,
            )


def validate_policy(policy: str) -> str:
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    return policy


def activation_loglik(c_count: int, p: ICParams) -> float:
    """log P(activation | c contagious neighbors) = log(1 - (1-p_e)(1-p_n)^c)."""
    if c_count < 0:
        raise ValueError("contagious count must be >= 0")
    return math.log(1.0 - (1.0 - p.p_e) * (1.0 - p.p_n) ** c_count)


def nonactivation_loglik(c_count: int, p: ICParams) -> float:
    """log P(no activation | c contagious neighbors) = log(1-p_e) + c*log(1-p_n)."""
    if c_count < 0:
        raise ValueError("contagious count must be >= 0")
    return math.log1p(-p.p_e) + c_count * math.log1p(-p.p_n)


class LogTables:
    """Memoized per-count log values shared by the solvers."""

    __slots__ = ("p", "ln_1pe", "ln_1pn", "_act")

    def __init__(self, p: ICParams):
        self.p = p
        self.ln_1pe = math.log1p(-p.p_e)
        self.ln_1pn = math.log1p(-p.p_n)
        self._act = [activation_loglik(0, p)]

    def act(self, c: int) -> float:
        tab = self._act
        while c >= len(tab):
            tab.append(activation_loglik(len(tab), self.p))
        return tab[c]

    def non(self, c: int) -> float:
        return self.ln_1pe + c * self.ln_1pn


def contagious_neighbors(
    g: Graph,
    cs: CascadeSet,
    cascade_id: int,
    v: int,
    interval: tuple[int, int],
    prev_interval: tuple[int, int] | None,
) -> int:
    """Number of in-neighbors of v activated during the preceding interval."""
    _check_adjacent(prev_interval, interval)
    if prev_interval is None:
        return 0
    cascade = cs.cascade(cascade_id)
    active = cascade.nodes_in(prev_interval[0], prev_interval[1])
    return sum(1 for u in g.in_adj[v] if u in active)


def interval_improvement(
    g: Graph,
    cs: CascadeSet,
    v: int,
    cascade_id: int,
    interval: tuple[int, int],
    prev_interval: tuple[int, int] | None,
    p: ICParams,
    policy: str = "contagious_only",
) -> float:
    """Improvement contributed by node v over one interval transition.

    Three cases by v's activation time relative to [s, e]: activated inside
    gains its activation log-likelihood over the spontaneous baseline; not
    yet activated (or never) contributes its non-activation term under the
    policy; already activated contributes nothing.
    """
    validate_policy(policy)
    c = contagious_neighbors(g, cs, cascade_id, v, interval, prev_interval)
    tab = LogTables(p)
    s, e = interval
    tv = cs.cascade(cascade_id).time_of.get(v)
    if tv is not None and tv < s:
        return 0.0
    if tv is not None and tv <= e:
        return tab.act(c) - tab.act(0)
    if policy == "none":
        return 0.0
    if policy == "contagious_only" and c == 0:
        return 0.0
    return tab.non(c)


def total_interval_improvement(
    g: Graph,
    cs: CascadeSet,
    interval: tuple[int, int],
    prev_interval: tuple[int, int] | None,
    p: ICParams,
    policy: str = "contagious_only",
) -> float:
    """Sum of node improvements over all cascades for one interval transition.

    A transition with no preceding interval scores 0 by definition: with no
    contagious neighbors possible, every activation stays at baseline.
    """
    validate_policy(policy)
    if prev_interval is None:
        return 0.0
    _check_adjacent(prev_interval, interval)
    tab = LogTables(p)
    s, e = interval
    total = 0.0
    for cascade in cs.cascades:
        counts = _target_counts(g, cascade, prev_interval, s)
        for w in sorted(counts):
            k = counts[w]
            tw = cascade.time_of.get(w)
            if tw is not None and tw <= e:
                total += tab.act(k) - tab.act(0)
            elif policy == "contagious_only":
                total += tab.non(k)
            elif policy == "full":
                total += k * tab.ln_1pn
        if policy == "full":
            inactive = g.node_count - _active_by(cascade, e)
            total += inactive * tab.ln_1pe
    return total


def total_loglik(
    g: Graph,
    cs: CascadeSet,
    clock: Clock,
    p: ICParams,
    policy: str = "contagious_only",
) -> float:
    """Log-likelihood of all cascades with events aggregated by the clock."""
    validate_policy(policy)
    ensure_clock_spans(cs, clock)
    tab = LogTables(p)
    total = 0.0
    prev: tuple[int, int] | None = None
    for iv in clock.intervals:
        total += _pair_terms(g, cs, prev, iv, tab, policy)
        prev = iv
    return total


def improvement(
    g: Graph,
    cs: CascadeSet,
    clock: Clock,
    p: ICParams,
    policy: str = "contagious_only",
) -> float:
    """Log-likelihood gain of the clock over the single-interval clock."""
    base = total_loglik(g, cs, clock_max(clock.horizon), p, policy)
    return total_loglik(g, cs, clock, p, policy) - base


def delta_for_cut(
    g: Graph,
    cs: CascadeSet,
    clock: Clock,
    t: int,
    p: ICParams,
    policy: str = "contagious_only",
) -> float:
    """Exact log-likelihood change from inserting one cut at position t.

    Only terms whose contagious-neighbor window changes are re-evaluated:
    the split interval's two halves and the interval immediately after it.
    Grouping by target keeps the evaluation exact; per-edge scores would
    not be, because the activation likelihood is non-additive in the
    contagious count.
    """
    validate_policy(policy)
    ensure_clock_spans(cs, clock)
    if not 2 <= t <= clock.horizon:
        raise ValueError(f"cut position {t} outside [2, {clock.horizon}]")
    if t in clock.boundaries:
        raise ValueError(f"position {t} is already a cut")
    tab = LogTables(p)
    idx = clock.remap_time(t) - 1
    ivs = clock.intervals
    s, e = ivs[idx]
    prev = ivs[idx - 1] if idx > 0 else None
    nxt = ivs[idx + 1] if idx + 1 < len(ivs) else None
    first = (s, t - 1)
    second = (t, e)

    new = _pair_terms(g, cs, prev, first, tab, policy)
    new += _pair_terms(g, cs, first, second, tab, policy)
    old = _pair_terms(g, cs, prev, (s, e), tab, policy)
    if nxt is not None:
        new += _pair_terms(g, cs, second, nxt, tab, policy)
        old += _pair_terms(g, cs, (s, e), nxt, tab, policy)
    return new - old


def ensure_clock_spans(cs: CascadeSet, clock: Clock) -> None:
    if clock.horizon != cs.horizon:
        raise ValueError(
            f"clock horizon {clock.horizon} != dataset horizon {cs.horizon}"
        )


def _check_adjacent(
    prev_interval: tuple[int, int] | None, interval: tuple[int, int]
) -> None:
    if interval[0] > interval[1]:
        raise ValueError(f"malformed interval {interval}")
    if prev_interval is None:
        return
    if prev_interval[0] > prev_interval[1]:
        raise ValueError(f"malformed interval {prev_interval}")
    if prev_interval[1] + 1 != interval[0]:
        raise ValueError(
            f"intervals {prev_interval} and {interval} are not adjacent"
        )


def _target_counts(
    g: Graph, cascade: Cascade, prev_interval: tuple[int, int], s: int
) -> dict[int, int]:
    """Contagious counts keyed by target node.

    Targets are out-neighbors of the nodes activated during the preceding
    interval, excluding targets already activated before tick s (those
    contribute nothing regardless of policy).
    """
    counts: dict[int, int] = {}
    time_of = cascade.time_of
    for u in cascade.nodes_in(prev_interval[0], prev_interval[1]):
        for w in g.out_adj[u]:
            tw = time_of.get(w)
            if tw is None or tw >= s:
                counts[w] = counts.get(w, 0) + 1
    return counts


def _active_by(cascade: Cascade, e: int) -> int:
    times = [a.time for a in cascade.activations]
    return bisect_right(times, e)


def _pair_terms(
    g: Graph,
    cs: CascadeSet,
    prev: tuple[int, int] | None,
    iv: tuple[int, int],
    tab: LogTables,
    policy: str,
) -> float:
    """All log-likelihood terms attributed to interval ``iv``.

    Activation terms for nodes activated during ``iv`` plus, per policy,
    non-activation terms for nodes still inactive after ``iv``.
    """
    s, e = iv
    total = 0.0
    for cascade in cs.cascades:
        counts = (
            _target_counts(g, cascade, prev, s) if prev is not None else {}
        )
        for node in cascade.nodes_in(s, e):
            total += tab.act(counts.get(node, 0))
        if policy == "none":
            continue
        time_of = cascade.time_of
        c_sum = 0
        c_hits = 0
        for w in sorted(counts):
            tw = time_of.get(w)
            if tw is None or tw > e:
                c_sum += counts[w]
                c_hits += 1
        if policy == "contagious_only":
            total += c_hits * tab.ln_1pe + c_sum * tab.ln_1pn
        else:  # full
            inactive = g.node_count - _active_by(cascade, e)
            total += inactive * tab.ln_1pe + c_sum * tab.ln_1pn
    return total
