"""Shared test utilities: random instances and independent reference evaluators."""
from __future__ import annotations

import math
import random

from netclock.cascades import CascadeSet, load_cascades
from netclock.clock import Clock
from netclock.graph import Graph, load_graph
from netclock.likelihood import ICParams


def random_instance(
    rng: random.Random,
    n_nodes: int = 9,
    n_cascades: int = 3,
    horizon: int = 8,
    density: float = 0.3,
) -> tuple[Graph, CascadeSet]:
    """Random directed graph plus random (not IC-sampled) cascades."""
    edges = [
        (u, v)
        for u in range(n_nodes)
        for v in range(n_nodes)
        if u != v and rng.random() < density
    ]
    if not edges:
        edges = [(0, 1)]
    g = load_graph(edges)
    records = []
    for cid in range(n_cascades):
        nodes = rng.sample(range(n_nodes), rng.randint(2, n_nodes))
        for v in nodes:
            records.append((cid, v, rng.randint(1, horizon)))
    return g, load_cascades(records, g)


def brute_total_loglik(
    g: Graph, cs: CascadeSet, clock: Clock, p: ICParams, policy: str
) -> float:
    """Naive per-step evaluation after remapping times through the clock.

    Deliberately independent of the production interval formulation: remap
    every activation to its step index, then walk steps 1..f applying the
    point formulas directly over all nodes.
    """
    total = 0.0
    f = clock.n_intervals
    for cascade in cs.cascades:
        steps = {v: clock.remap_time(t) for v, t in cascade.time_of.items()}
        for t in range(1, f + 1):
            prev_active = {v for v, s in steps.items() if s == t - 1}
            for v in range(g.node_count):
                c = sum(1 for u in g.in_adj[v] if u in prev_active)
                sv = steps.get(v)
                if sv == t:
                    total += math.log(1 - (1 - p.p_e) * (1 - p.p_n) ** c)
                elif sv is None or sv > t:
                    if policy == "none":
                        continue
                    if policy == "contagious_only" and c == 0:
                        continue
                    total += math.log(1 - p.p_e) + c * math.log(1 - p.p_n)
    return total


def brute_improvement(
    g: Graph, cs: CascadeSet, clock: Clock, p: ICParams, policy: str
) -> float:
    base = brute_total_loglik(g, cs, Clock(cs.horizon), p, policy)
    return brute_total_loglik(g, cs, clock, p, policy) - base


def chain_fixture() -> tuple[Graph, CascadeSet]:
    """Path 0 -> 1 -> 2 with one cascade activating each node in sequence."""
    g = load_graph([(0, 1), (1, 2)])
    cs = load_cascades([(0, 0, 1), (0, 1, 2), (0, 2, 3)], g)
    return g, cs
