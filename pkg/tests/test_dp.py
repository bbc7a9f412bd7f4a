import random

import pytest

from netclock.cascades import compress_timeline, load_cascades
from netclock.clock import clock_max, clock_min
from netclock.dp import conditional_interval_improvement, solve_oc_dp
from netclock.graph import load_graph
from netclock.likelihood import ICParams, improvement
from netclock.oracle import oracle_oc

from helpers import chain_fixture, random_instance

P = ICParams(0.001, 0.1)
TOL = 1e-9
CHAIN_IMPROVEMENT = 9.228259854719123


def test_chain_recovers_original_timeline():
    g, cs = chain_fixture()
    clock, value = solve_oc_dp(g, cs, P)
    assert clock == clock_min(3)
    assert value == pytest.approx(CHAIN_IMPROVEMENT, abs=TOL)


def test_single_activation_ties_to_coarsest():
    g = load_graph([(0, 1)])
    cs = load_cascades([(0, 0, 1), (1, 1, 3)], g)
    clock, value = solve_oc_dp(g, cs, P)
    assert clock == clock_max(3)
    assert value == pytest.approx(0.0, abs=TOL)


def test_horizon_one():
    g = load_graph([(0, 1)])
    cs = load_cascades([(0, 0, 1), (0, 1, 1)], g)
    clock, value = solve_oc_dp(g, cs, P)
    assert clock == clock_max(1)
    assert value == 0.0


def test_empty_dataset():
    g = load_graph([(0, 1)])
    cs = load_cascades([], g)
    clock, value = solve_oc_dp(g, cs, P)
    assert value == 0.0
    assert clock == clock_max(cs.horizon)


def test_horizon_guard():
    g = load_graph([(0, 1)])
    cs = load_cascades([(0, 0, 1), (0, 1, 2)], g)
    with pytest.raises(ValueError, match="greedy"):
        solve_oc_dp(g, cs, P, max_horizon=1)


def test_matches_oracle_all_policies():
    rng = random.Random(23)
    for _ in range(30):
        g, cs = random_instance(rng, n_nodes=8, n_cascades=3, horizon=7)
        cs = compress_timeline(cs)
        for policy in ("none", "contagious_only", "full"):
            want_clock, want = oracle_oc(g, cs, P, policy)
            got_clock, got = solve_oc_dp(g, cs, P, policy)
            assert got == pytest.approx(want, abs=TOL)
            assert improvement(g, cs, got_clock, P, policy) == pytest.approx(
                improvement(g, cs, want_clock, P, policy), abs=TOL
            )


def test_value_equals_improvement_of_returned_clock():
    rng = random.Random(29)
    for _ in range(20):
        g, cs = random_instance(rng)
        cs = compress_timeline(cs)
        for policy in ("none", "contagious_only", "full"):
            clock, value = solve_oc_dp(g, cs, P, policy)
            assert value == pytest.approx(
                improvement(g, cs, clock, P, policy), abs=TOL
            )


def test_prefix_values_match_table_entries():
    # walking the returned clock's interval chain, the running sum of
    # transition improvements must reproduce each table entry exactly
    from netclock.dp import _dp_tables
    from netclock.likelihood import total_interval_improvement

    rng = random.Random(31)
    for _ in range(10):
        g, cs = random_instance(rng, n_nodes=8, n_cascades=3, horizon=7)
        cs = compress_timeline(cs)
        clock, value = solve_oc_dp(g, cs, P)
        best, _ = _dp_tables(g, cs, P, "contagious_only", None)
        running = 0.0
        prev = None
        for iv in clock.intervals:
            running += total_interval_improvement(g, cs, iv, prev, P)
            assert running == pytest.approx(best[iv[0], iv[1]], abs=TOL)
            prev = iv
        assert running == pytest.approx(value, abs=TOL)


def test_conditioned_empty_prior_equals_activation_only_run():
    rng = random.Random(37)
    for _ in range(10):
        g, cs = random_instance(rng)
        cs = compress_timeline(cs)
        cond_clock, cond_value = solve_oc_dp(g, cs, P, condition={})
        none_clock, none_value = solve_oc_dp(g, cs, P, policy="none")
        assert cond_value == pytest.approx(none_value, abs=TOL)
        assert improvement(g, cs, cond_clock, P, "none") == pytest.approx(
            improvement(g, cs, none_clock, P, "none"), abs=TOL
        )


def test_conditioned_prior_reduces_value():
    g, cs = chain_fixture()
    _, base = solve_oc_dp(g, cs, P, condition={})
    prior = {(0, 1): 1.0, (0, 2): 1.0}
    _, reduced = solve_oc_dp(g, cs, P, condition=prior)
    assert reduced == pytest.approx(base - 2.0, abs=TOL)


def test_conditioned_prior_above_gain_clamps_to_zero():
    g, cs = chain_fixture()
    prior = {(0, 1): 100.0, (0, 2): 100.0}
    _, value = solve_oc_dp(g, cs, P, condition=prior)
    assert value == pytest.approx(0.0, abs=TOL)


def test_conditional_interval_improvement_clamps():
    assert conditional_interval_improvement(4.614129927359562, 0.0) == pytest.approx(
        4.614129927359562, abs=TOL
    )
    assert conditional_interval_improvement(4.614129927359562, 1.0) == pytest.approx(
        3.614129927359562, abs=TOL
    )
    assert conditional_interval_improvement(2.0, 5.0) == 0.0
    with pytest.raises(ValueError):
        conditional_interval_improvement(1.0, -0.5)


def test_runtime_growth_is_polynomial():
    # empirical log-log slope over doubling horizons stays at or below cubic
    import time

    import numpy as np

    from netclock.cascades import Cascade, CascadeSet

    rng = random.Random(41)
    g = load_graph([(u, v) for u in range(30) for v in range(30)
                    if u != v and rng.random() < 0.12])
    times = []
    horizons = [16, 32, 64, 128]
    for T in horizons:
        records = []
        for cid in range(4):
            nodes = rng.sample(range(30), 25)
            for v in nodes:
                records.append((cid, v, rng.randint(1, T)))
        cs = load_cascades(records, g)
        reps = 3
        t0 = time.perf_counter()
        for _ in range(reps):
            solve_oc_dp(g, cs, P)
        times.append((time.perf_counter() - t0) / reps)
    slope = float(np.polyfit(np.log(horizons), np.log(times), 1)[0])
    assert slope <= 3.4, f"DP runtime slope {slope:.2f} grew faster than cubic"
