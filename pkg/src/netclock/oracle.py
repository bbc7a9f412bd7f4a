"""Brute-force reference solvers: ground truth for the exactness tests.

No pruning, by design.  Guards refuse instances whose enumeration would
blow up (2^(T-1) clocks, and all k-subsets of those for the multi-clock
variant).
"""
from __future__ import annotations

from itertools import combinations

from .cascades import CascadeSet
from .clock import Clock, enumerate_clocks
from .graph import Graph
from .likelihood import ICParams, improvement, validate_policy
from .multiclock import MultiClockSolution, assignment_from_scores, node_scores

ORACLE_OC_HORIZON_LIMIT = 20
ORACLE_KOC_HORIZON_LIMIT = 8
ORACLE_KOC_K_LIMIT = 3


def oracle_oc(
    g: Graph,
    cs: CascadeSet,
    p: ICParams,
    policy: str = "contagious_only",
) -> tuple[Clock, float]:
    """Globally optimal clock by exhaustive enumeration.

    Clocks are visited by cut count then lexicographic cut order, and a
    candidate replaces the incumbent only on strict improvement, so ties
    resolve toward fewer cuts, then the lexicographically smallest set.
    """
    validate_policy(policy)
    if cs.horizon > ORACLE_OC_HORIZON_LIMIT:
        raise ValueError(
            f"horizon {cs.horizon} exceeds oracle limit {ORACLE_OC_HORIZON_LIMIT}"
        )
    best_clock: Clock | None = None
    best_value = float("-inf")
    for clock in enumerate_clocks(cs.horizon):
        value = improvement(g, cs, clock, p, policy)
        if value > best_value:
            best_clock, best_value = clock, value
    assert best_clock is not None
    return best_clock, best_value


def oracle_koc(
    g: Graph,
    cs: CascadeSet,
    k: int,
    p: ICParams,
) -> MultiClockSolution:
    """Globally optimal clock set of size <= k by exhaustive enumeration."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if cs.horizon > ORACLE_KOC_HORIZON_LIMIT:
        raise ValueError(
            f"horizon {cs.horizon} exceeds oracle limit {ORACLE_KOC_HORIZON_LIMIT}"
        )
    if k > ORACLE_KOC_K_LIMIT:
        raise ValueError(f"k={k} exceeds oracle limit {ORACLE_KOC_K_LIMIT}")

    clocks = list(enumerate_clocks(cs.horizon))
    # score_rows[i][v] = improvement of node v's activations under clock i
    score_rows = [node_scores(g, cs, clock, p) for clock in clocks]
    nodes = sorted({v for row in score_rows for v in row})

    k = min(k, len(clocks))
    best_value = float("-inf")
    best_combo: tuple[int, ...] | None = None
    for combo in combinations(range(len(clocks)), k):
        value = sum(
            max(score_rows[i].get(v, 0.0) for i in combo) for v in nodes
        )
        if value > best_value:
            best_value, best_combo = value, combo
    assert best_combo is not None

    chosen = tuple(clocks[i] for i in best_combo)
    rows = [score_rows[i] for i in best_combo]
    assignment = assignment_from_scores(g.node_count, rows)
    return MultiClockSolution(
        clocks=chosen,
        assignment=assignment,
        per_clock_gain=(),
        total=best_value if best_value > float("-inf") else 0.0,
    )
