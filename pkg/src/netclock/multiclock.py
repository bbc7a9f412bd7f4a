"""Multi-clock detection: each node follows the clock that best explains it.

The objective of a clock set is the sum over nodes of the best per-node
improvement achievable by any clock in the set, where a node's score under
a clock is the improvement of its own activation terms with all events
remapped by that clock.  The max-over-clocks structure makes the objective
monotone and submodular in the set, so greedy selection of one clock at a
time carries the usual (1 - 1/e) guarantee when the inner step is exact.

Each greedy round runs a single-clock solver on the conditioned objective:
every activation term is clamped to its marginal gain over the node's best
already-selected clock.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cascades import CascadeSet
from .clock import Clock
from .graph import Graph
from .likelihood import ICParams, LogTables

MIN_MARGINAL_GAIN = 1e-9

INNER_SOLVERS = ("dp", "greedy")


@dataclass(frozen=True)
class MultiClockSolution:
    clocks: tuple[Clock, ...]
    assignment: dict[int, int]
    per_clock_gain: tuple[float, ...]
    total: float


def node_cascade_scores(
    g: Graph, cs: CascadeSet, clock: Clock, p: ICParams
) -> dict[tuple[int, int], float]:
    """Activation improvement per (cascade_id, node) under one clock.

    Only strictly positive entries are stored; a missing key scores 0
    (the activation is spontaneous under this clock).
    """
    tab = LogTables(p)
    scores: dict[tuple[int, int], float] = {}
    for cascade in cs.cascades:
        idx_of = {node: clock.remap_time(t) for node, t in cascade.time_of.items()}
        for a in cascade.activations:
            i = idx_of[a.node]
            if i == 1:
                continue
            c = sum(1 for u in g.in_adj[a.node] if idx_of.get(u) == i - 1)
            if c:
                scores[(cascade.id, a.node)] = tab.act(c) - tab.act(0)
    return scores


def node_scores(g: Graph, cs: CascadeSet, clock: Clock, p: ICParams) -> dict[int, float]:
    """Per-node activation improvement under one clock, summed over cascades."""
    totals: dict[int, float] = {}
    for (_, node), value in sorted(node_cascade_scores(g, cs, clock, p).items()):
        totals[node] = totals.get(node, 0.0) + value
    return totals


def multi_improvement(
    g: Graph, cs: CascadeSet, clocks: tuple[Clock, ...] | list[Clock], p: ICParams
) -> float:
    """Sum over nodes of the best per-node score across the clock set."""
    if not clocks:
        raise ValueError("clock set must contain at least one clock")
    rows = [node_scores(g, cs, clock, p) for clock in clocks]
    nodes = sorted({v for row in rows for v in row})
    return sum(max(row.get(v, 0.0) for row in rows) for v in nodes)


def assign_nodes(
    g: Graph, cs: CascadeSet, clocks: tuple[Clock, ...] | list[Clock], p: ICParams
) -> dict[int, int]:
    """Map every node to its best-scoring clock (ties to the lowest index)."""
    if not clocks:
        raise ValueError("clock set must contain at least one clock")
    rows = [node_scores(g, cs, clock, p) for clock in clocks]
    return assignment_from_scores(g.node_count, rows)


def assignment_from_scores(
    node_count: int, rows: list[dict[int, float]]
) -> dict[int, int]:
    assignment: dict[int, int] = {}
    for v in range(node_count):
        best_idx = 0
        best = rows[0].get(v, 0.0) if rows else 0.0
        for i in range(1, len(rows)):
            value = rows[i].get(v, 0.0)
            if value > best:
                best, best_idx = value, i
        assignment[v] = best_idx
    return assignment


def solve_koc(
    g: Graph,
    cs: CascadeSet,
    k: int,
    p: ICParams,
    inner: str = "dp",
) -> MultiClockSolution:
    """Greedily add up to k clocks, one conditioned single-clock solve per round.

    The first round's prior is empty, so it finds the clock maximizing the
    plain activation-only improvement.  Later rounds stop early once the
    marginal gain falls below ``MIN_MARGINAL_GAIN``.
    """
    from .dp import solve_oc_dp
    from .greedy import solve_oc_greedy

    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if inner not in INNER_SOLVERS:
        raise ValueError(f"unknown inner solver {inner!r}; expected {INNER_SOLVERS}")
    solver = solve_oc_dp if inner == "dp" else solve_oc_greedy

    chosen: list[Clock] = []
    score_rows: list[dict[tuple[int, int], float]] = []
    gains: list[float] = []
    current_total = 0.0
    for _ in range(k):
        prior = _prior_map(g.node_count, score_rows)
        clock, _ = solver(g, cs, p, condition=prior)
        candidate_total = multi_improvement(g, cs, chosen + [clock], p)
        marginal = candidate_total - current_total
        if chosen and marginal < MIN_MARGINAL_GAIN:
            break
        chosen.append(clock)
        score_rows.append(node_cascade_scores(g, cs, clock, p))
        gains.append(marginal)
        current_total = candidate_total

    assignment = assign_nodes(g, cs, chosen, p)
    return MultiClockSolution(
        clocks=tuple(chosen),
        assignment=assignment,
        per_clock_gain=tuple(gains),
        total=current_total,
    )


def _prior_map(
    node_count: int, score_rows: list[dict[tuple[int, int], float]]
) -> dict[tuple[int, int], float]:
    """Per-(cascade, node) improvement under each node's best clock so far.

    The best clock is chosen per node by its summed score across cascades;
    the prior for (cascade, node) is then that clock's per-cascade entry.
    """
    if not score_rows:
        return {}
    node_totals: list[dict[int, float]] = []
    for row in score_rows:
        totals: dict[int, float] = {}
        for (_, node), value in row.items():
            totals[node] = totals.get(node, 0.0) + value
        node_totals.append(totals)
    best_row = assignment_from_scores(node_count, node_totals)
    prior: dict[tuple[int, int], float] = {}
    for i, row in enumerate(score_rows):
        for key, value in row.items():
            if best_row[key[1]] == i:
                prior[key] = value
    return prior
