import random

import pytest

from netclock.cascades import compress_timeline, load_cascades, tick_activations
from netclock.clock import Clock, clock_max, clock_min
from netclock.dp import solve_oc_dp
from netclock.graph import load_graph
from netclock.greedy import (
    ActiveEdge,
    CutCandidate,
    add_or_drop,
    build_active_edges,
    solve_oc_greedy,
    spanning_edges,
)
from netclock.likelihood import ICParams, LogTables, delta_for_cut, improvement

from helpers import chain_fixture, random_instance

P = ICParams(0.001, 0.1)
TOL = 1e-9
CHAIN_IMPROVEMENT = 9.228259854719123


class TestActiveEdges:
    def test_chain_edge_spans(self):
        g = load_graph([(0, 1)])
        cs = load_cascades([(0, 0, 1), (0, 1, 3)], g)
        edges = build_active_edges(g, cs)
        assert edges == [ActiveEdge(0, 0, 1, 1, 3)]
        assert edges[0].spans(2) and edges[0].spans(3)
        assert not edges[0].spans(1) and not edges[0].spans(4)

    def test_simultaneous_activation_is_not_active(self):
        g = load_graph([(0, 1)])
        cs = load_cascades([(0, 0, 2), (0, 1, 2)], g)
        assert build_active_edges(g, cs) == []

    def test_target_not_in_cascade(self):
        g = load_graph([(0, 1), (0, 2)])
        cs = load_cascades([(0, 0, 1), (0, 1, 2)], g)
        edges = build_active_edges(g, cs)
        assert [(e.source, e.target) for e in edges] == [(0, 1)]

    def test_cut_count(self):
        edge = ActiveEdge(0, 0, 1, 2, 6)
        assert edge.cut_count(Clock(8, (4, 6, 8))) == 2
        assert edge.cut_count(clock_max(8)) == 0


class TestAddOrDrop:
    def test_accepts_into_empty(self):
        acc = []
        assert add_or_drop(acc, CutCandidate(3, 1.0), lambda a, b: True)
        assert acc == [CutCandidate(3, 1.0)]

    def test_conflicting_lower_score_dropped(self):
        acc = [CutCandidate(3, 2.0)]
        assert not add_or_drop(acc, CutCandidate(5, 1.0), lambda a, b: True)
        assert acc == [CutCandidate(3, 2.0)]

    def test_conflicting_higher_score_replaces(self):
        acc = [CutCandidate(3, 1.0)]
        assert add_or_drop(acc, CutCandidate(5, 2.0), lambda a, b: True)
        assert acc == [CutCandidate(5, 2.0)]

    def test_non_conflicting_appended(self):
        acc = [CutCandidate(3, 2.0)]
        assert add_or_drop(acc, CutCandidate(9, 0.5), lambda a, b: False)
        assert acc == [CutCandidate(3, 2.0), CutCandidate(9, 0.5)]

    def test_total_score_never_decreases(self):
        rng = random.Random(2)
        acc = []
        conflict = lambda a, b: (b - a) < 3
        total = 0.0
        for _ in range(200):
            cand = CutCandidate(rng.randint(2, 60), rng.random() * 5)
            before = sum(c.score for c in acc)
            add_or_drop(acc, cand, conflict)
            after = sum(c.score for c in acc)
            assert after >= before - TOL
            positions = [c.position for c in acc]
            assert positions == sorted(positions)


class TestSolver:
    def test_chain_recovers_min_clock(self):
        g, cs = chain_fixture()
        clock, value = solve_oc_greedy(g, cs, P)
        assert clock == clock_min(3)
        assert value == pytest.approx(CHAIN_IMPROVEMENT, abs=TOL)

    def test_all_simultaneous_keeps_max(self):
        g = load_graph([(0, 1), (1, 2)])
        cs = load_cascades([(0, 0, 1), (0, 1, 1), (0, 2, 1)], g)
        clock, value = solve_oc_greedy(g, cs, P)
        assert clock == clock_max(1)
        assert value == 0.0

    def test_value_matches_improvement(self):
        rng = random.Random(3)
        for _ in range(20):
            g, cs = random_instance(rng)
            cs = compress_timeline(cs)
            for policy in ("none", "contagious_only", "full"):
                clock, value = solve_oc_greedy(g, cs, P, policy)
                assert value == pytest.approx(
                    improvement(g, cs, clock, P, policy), abs=TOL
                )

    def test_local_optimality_at_termination(self):
        rng = random.Random(5)
        for _ in range(20):
            g, cs = random_instance(rng)
            cs = compress_timeline(cs)
            for policy in ("none", "contagious_only", "full"):
                clock, _ = solve_oc_greedy(g, cs, P, policy)
                for t in range(2, cs.horizon + 1):
                    if t in clock.boundaries:
                        continue
                    assert delta_for_cut(g, cs, clock, t, P, policy) <= TOL

    def test_never_beats_dp(self):
        rng = random.Random(7)
        for _ in range(25):
            g, cs = random_instance(rng, horizon=7)
            cs = compress_timeline(cs)
            _, dp_value = solve_oc_dp(g, cs, P)
            _, gr_value = solve_oc_greedy(g, cs, P)
            assert 0.0 <= gr_value <= dp_value + TOL

    def test_improvement_nondecreasing_across_sweeps(self):
        # apply accepted batches one at a time and watch the true objective
        import netclock.greedy as G

        rng = random.Random(11)
        for _ in range(10):
            g, cs = random_instance(rng)
            cs = compress_timeline(cs)
            tab = LogTables(P)
            ticks = tick_activations(cs)
            time_of = {c.id: c.time_of for c in cs.cascades}
            positions = [t for t in range(2, cs.horizon + 1) if ticks[t - 1]]
            prefix = [0] * (cs.horizon + 1)
            for t in range(1, cs.horizon + 1):
                prefix[t] = prefix[t - 1] + len(ticks[t - 1])
            spanmax = [0] * (cs.horizon + 1)
            for e in build_active_edges(g, cs):
                spanmax[e.time_source] = max(spanmax[e.time_source], e.time_target)
            for t in range(1, cs.horizon + 1):
                spanmax[t] = max(spanmax[t], spanmax[t - 1])
            conflicts = lambda a, b: spanmax[a - 1] >= b

            boundaries: set[int] = set()
            last = 0.0
            for _sweep in range(len(positions) + 1):
                clock = Clock(cs.horizon, tuple(boundaries))
                accepted = G._sweep(
                    g, cs, clock, tab, "contagious_only", None, ticks, time_of,
                    positions, prefix, conflicts,
                )
                if not accepted:
                    break
                boundaries.update(c.position for c in accepted)
                now = improvement(g, cs, Clock(cs.horizon, tuple(boundaries)), P)
                assert now >= last - TOL
                assert now >= last + sum(c.score for c in accepted) - 1e-6
                last = now

    def test_batch_edge_disjoint(self):
        # every accepted batch must be pairwise edge-disjoint
        import netclock.greedy as G

        rng = random.Random(13)
        for _ in range(10):
            g, cs = random_instance(rng)
            cs = compress_timeline(cs)
            edges = build_active_edges(g, cs)
            tab = LogTables(P)
            ticks = tick_activations(cs)
            time_of = {c.id: c.time_of for c in cs.cascades}
            positions = [t for t in range(2, cs.horizon + 1) if ticks[t - 1]]
            prefix = [0] * (cs.horizon + 1)
            for t in range(1, cs.horizon + 1):
                prefix[t] = prefix[t - 1] + len(ticks[t - 1])
            spanmax = [0] * (cs.horizon + 1)
            for e in edges:
                spanmax[e.time_source] = max(spanmax[e.time_source], e.time_target)
            for t in range(1, cs.horizon + 1):
                spanmax[t] = max(spanmax[t], spanmax[t - 1])
            accepted = G._sweep(
                g, cs, clock_max(cs.horizon), tab, "contagious_only", None,
                ticks, time_of, positions, prefix,
                lambda a, b: spanmax[a - 1] >= b,
            )
            spans = [spanning_edges(edges, c.position) for c in accepted]
            for i in range(len(spans)):
                for j in range(i + 1, len(spans)):
                    assert not (spans[i] & spans[j])

    def test_sweep_count_bounded_by_positions(self):
        rng = random.Random(17)
        g, cs = random_instance(rng, n_nodes=10, n_cascades=4, horizon=10)
        cs = compress_timeline(cs)
        # termination within the solver's internal bound: just run it
        clock, _ = solve_oc_greedy(g, cs, P)
        assert clock.horizon == cs.horizon

    def test_conditioned_run_clamps(self):
        g, cs = chain_fixture()
        _, base = solve_oc_greedy(g, cs, P, condition={})
        _, reduced = solve_oc_greedy(
            g, cs, P, condition={(0, 1): 1.0, (0, 2): 1.0}
        )
        assert reduced == pytest.approx(base - 2.0, abs=TOL)
        _, zero = solve_oc_greedy(
            g, cs, P, condition={(0, 1): 100.0, (0, 2): 100.0}
        )
        assert zero == pytest.approx(0.0, abs=TOL)
