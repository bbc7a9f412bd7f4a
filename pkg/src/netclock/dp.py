"""Exact single-clock solver via dynamic programming over timeline intervals.

The best clock ending in interval [s, e] extends the best clock ending at
s-1 with the transition improvement of [s, e] given that predecessor.  The
table covers all O(T^2) intervals; each maximization scans O(T)
predecessors, so the fill is O(T^3) plus the cost of maintaining the
per-target contagious counts.

For a fixed split point s the transition values for all (predecessor start
b, interval end e) pairs are built incrementally: walking b from s-1 down
to 1 grows the predecessor window one tick at a time, and each new source
activation bumps the counts of its out-neighbor targets.  Per (s, b) the
value as a function of e is a prefix sum over targets bucketed by their
activation time, which vectorizes.
"""
from __future__ import annotations

import numpy as np

from .cascades import CascadeSet, tick_activations
from .clock import Clock, clock_max
from .graph import Graph
from .likelihood import ICParams, LogTables, validate_policy

DP_HORIZON_LIMIT = 2000

# target roles inside one split-point pass
_ACTIVE = 0  # target activates at tick >= s: bucketed activation improvement
_INACTIVE = 1  # target absent from the cascade: non-activation terms only


def solve_oc_dp(
    g: Graph,
    cs: CascadeSet,
    p: ICParams,
    policy: str = "contagious_only",
    condition: dict[tuple[int, int], float] | None = None,
    max_horizon: int = DP_HORIZON_LIMIT,
) -> tuple[Clock, float]:
    """Return the improvement-optimal clock and its improvement.

    When ``condition`` is given it maps (cascade_id, node) to the node's
    improvement already secured by previously selected clocks; every
    activation term is then clamped to max(0, gain - prior) and
    non-activation terms drop out, which is the marginal objective used by
    the multi-clock greedy.  A conditioned run with an all-zero prior
    therefore matches an unconditioned run under policy ``"none"``.

    Ties between predecessors are broken toward the smallest start, which
    prefers coarser clocks among equals.
    """
    validate_policy(policy)
    T = cs.horizon
    if T > max_horizon:
        raise ValueError(
            f"horizon {T} exceeds the DP limit {max_horizon} (cubic cost); "
            "compress the timeline or use the greedy solver"
        )
    if cs.total_activations == 0 or T == 1:
        return clock_max(T), 0.0

    best, back = _dp_tables(g, cs, p, policy, condition)
    final = best[1 : T + 1, T]
    s_star = 1 + int(np.argmax(final))
    value = float(final[s_star - 1])

    boundaries = []
    s_cur, e_cur = s_star, T
    while s_cur > 1:
        boundaries.append(s_cur)
        b = int(back[s_cur, e_cur])
        s_cur, e_cur = b, s_cur - 1
    return Clock(T, tuple(boundaries)), value


def _dp_tables(
    g: Graph,
    cs: CascadeSet,
    p: ICParams,
    policy: str,
    condition: dict[tuple[int, int], float] | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Fill the interval tables.

    ``best[s, e]`` is the largest improvement of any clock on [1, e] whose
    last interval starts at s; ``back[s, e]`` the start of the predecessor
    interval achieving it.
    """
    T = cs.horizon
    tab = LogTables(p)
    conditioned = condition is not None
    prior = condition or {}
    ticks = tick_activations(cs)
    time_of = {c.id: c.time_of for c in cs.cascades}
    out_adj = g.out_adj

    # prefix[t] = number of activations at ticks <= t, for full-policy bulk terms
    prefix = np.zeros(T + 1, dtype=np.int64)
    for t in range(1, T + 1):
        prefix[t] = prefix[t - 1] + len(ticks[t - 1])
    n_casc = len(cs.cascades)

    # best[s][e] = best improvement of a clock on [1, e] whose last interval
    # starts at s; back[s][e] = start of the maximizing predecessor interval.
    best = np.full((T + 2, T + 2), -np.inf)
    back = np.zeros((T + 2, T + 2), dtype=np.int32)
    if policy == "full" and not conditioned:
        total = cs.total_activations
        best[1, 1:T + 1] = (total - prefix[1:T + 1]) * tab.ln_1pe
    else:
        best[1, 1:T + 1] = 0.0

    for s in range(2, T + 1):
        width = T - s + 1  # values of e: s..T
        # per-target state, keyed (cascade_id, node): [role, count, act_tick]
        roles: dict[tuple[int, int], list[int]] = {}
        base_sum = 0.0  # sum of non-activation parts over all tracked targets
        bucket = np.zeros(width)  # indexed e-s: activation-minus-nonactivation
        if policy == "full" and not conditioned:
            bulk = (n_casc * g.node_count - prefix[s:T + 1]) * tab.ln_1pe
        else:
            bulk = None

        run_best = np.full(width, -np.inf)
        run_arg = np.zeros(width, dtype=np.int32)
        for b in range(s - 1, 0, -1):
            for cid, u in ticks[b - 1]:
                casc_times = time_of[cid]
                for w in out_adj[u]:
                    tw = casc_times.get(w)
                    if tw is not None and tw < s:
                        continue
                    key = (cid, w)
                    state = roles.get(key)
                    if state is None:
                        role = _ACTIVE if tw is not None else _INACTIVE
                        state = roles[key] = [role, 0, tw or 0]
                    c = state[1] + 1
                    state[1] = c
                    if conditioned:
                        if state[0] == _INACTIVE:
                            continue
                        floor = prior.get(key, 0.0)
                        old = max(0.0, tab.act(c - 1) - tab.act(0) - floor)
                        new = max(0.0, tab.act(c) - tab.act(0) - floor)
                        bucket[state[2] - s] += new - old
                        continue
                    non_old = _non_part(tab, c - 1, policy)
                    non_new = _non_part(tab, c, policy)
                    base_sum += non_new - non_old
                    if state[0] == _ACTIVE:
                        act_delta = tab.act(c) - tab.act(c - 1)
                        bucket[state[2] - s] += (act_delta) - (non_new - non_old)
            row = base_sum + np.cumsum(bucket)
            if bulk is not None:
                row = row + bulk
            cand = best[b, s - 1] + row
            # >= so ties go to the smallest predecessor start (b descends)
            better = cand >= run_best
            run_best[better] = cand[better]
            run_arg[better] = b

        best[s, s:T + 1] = run_best
        back[s, s:T + 1] = run_arg
    return best, back


def conditional_interval_improvement(
    current: float, prior: float
) -> float:
    """Marginal improvement of a term given the prior already secured."""
    if prior < 0:
        raise ValueError(f"prior improvement must be >= 0, got {prior}")
    return max(0.0, current - prior)


def _non_part(tab: LogTables, c: int, policy: str) -> float:
    """Non-activation value of a tracked target with contagious count c."""
    if policy == "none" or c == 0:
        return 0.0
    if policy == "contagious_only":
        return tab.non(c)
    return c * tab.ln_1pn  # full: the per-node constant lives in the bulk term
