"""Hide-and-recover cascade completion.

Activations are hidden at random (the first and last of each cascade are
always kept), observed times are remapped through a clock, and a forest is
reconstructed in which every observed activation sits at graph distance
from a root equal to its remapped step offset.  Reconstruction may have to
infer unobserved intermediate activations; those inferences are scored
against the hidden ground truth as precision/recall.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..cascades import Activation, Cascade, CascadeSet
from ..clock import Clock
from ..graph import Graph


@dataclass(frozen=True)
class CompletionInstance:
    observed: Cascade
    hidden: frozenset[Activation]
    drop_rate: float


@dataclass(frozen=True)
class CompletionResult:
    feasible: bool
    inferred: frozenset[int]
    precision: float
    recall: float
    f1: float


def hide(cascade: Cascade, drop_rate: float, rng: random.Random) -> CompletionInstance:
    """Drop interior activations independently with the given probability."""
    if not 0.0 <= drop_rate < 1.0:
        raise ValueError(f"drop_rate must be in [0, 1), got {drop_rate}")
    if cascade.size < 2:
        raise ValueError(f"cascade {cascade.id} has fewer than 2 activations")
    kept = [cascade.activations[0]]
    hidden = []
    for a in cascade.activations[1:-1]:
        if rng.random() < drop_rate:
            hidden.append(a)
        else:
            kept.append(a)
    kept.append(cascade.activations[-1])
    observed = Cascade(
        id=cascade.id,
        activations=tuple(kept),
        time_of={a.node: a.time for a in kept},
    )
    return CompletionInstance(
        observed=observed, hidden=frozenset(hidden), drop_rate=drop_rate
    )


def complete(g: Graph, instance: CompletionInstance, clock: Clock) -> CompletionResult:
    """Reconstruct a depth-consistent forest over the observed activations.

    Observed nodes are processed by increasing remapped step.  Each attaches
    to an in-neighbor already placed one step earlier when one exists;
    otherwise a backward breadth-first search finds the shortest chain of
    unobserved intermediates down to any placed node, so false positives
    stay minimal.  Failure to place any observed node makes the cascade
    infeasible (a result, not an error: the underlying problem is hard and
    the search is a heuristic).
    """
    steps = {a.node: clock.remap_time(a.time) for a in instance.observed.activations}
    base = min(steps.values())
    depth_of = {v: s - base for v, s in steps.items()}
    placed: dict[int, int] = {v: 0 for v, d in depth_of.items() if d == 0}
    observed_nodes = set(steps)
    inferred: dict[int, int] = {}

    for v in sorted(observed_nodes, key=lambda v: (depth_of[v], v)):
        d = depth_of[v]
        if d == 0:
            continue
        if any(placed.get(u) == d - 1 for u in g.in_adj[v]):
            placed[v] = d
            continue
        chain = _shortest_chain(g, v, d, placed, observed_nodes)
        if chain is None:
            return CompletionResult(
                feasible=False,
                inferred=frozenset(),
                precision=0.0,
                recall=0.0,
                f1=0.0,
            )
        for depth, node in chain:
            placed[node] = depth
            inferred[node] = depth
        placed[v] = d

    hidden_nodes = {a.node for a in instance.hidden}
    inferred_nodes = frozenset(inferred)
    tp = len(inferred_nodes & hidden_nodes)
    precision = tp / len(inferred_nodes) if inferred_nodes else 1.0
    recall = tp / len(hidden_nodes) if hidden_nodes else 1.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return CompletionResult(
        feasible=True,
        inferred=inferred_nodes,
        precision=precision,
        recall=recall,
        f1=f1,
    )


def _shortest_chain(
    g: Graph,
    v: int,
    d: int,
    placed: dict[int, int],
    observed: set[int],
) -> list[tuple[int, int]] | None:
    """Shortest chain of inferable nodes from v down to a placed node.

    Layer h of the backward search holds candidates for depth d-h; a
    candidate whose in-neighborhood contains a node placed at depth d-h-1
    closes the chain.  Candidates must be unplaced and unobserved (observed
    nodes have fixed depths of their own).
    """
    frontier = [v]
    parent: dict[int, int] = {}
    seen = {v}
    for h in range(1, d):
        next_frontier: list[int] = []
        for x in frontier:
            for u in sorted(g.in_adj[x]):
                if u in seen or u in observed or u in placed:
                    continue
                seen.add(u)
                parent[u] = x
                if any(placed.get(w) == d - h - 1 for w in g.in_adj[u]):
                    chain = []
                    node, depth = u, d - h
                    while node != v:
                        chain.append((depth, node))
                        node = parent[node]
                        depth += 1
                    return chain
                next_frontier.append(u)
        if not next_frontier:
            return None
        frontier = next_frontier
    return None


def completion_batch(
    g: Graph,
    cs: CascadeSet,
    clock: Clock,
    drop_rates: list[float],
    seed: int = 0,
) -> list[dict[str, float]]:
    """Hide-and-recover over every cascade at each drop rate.

    Infeasible reconstructions count as zero precision/recall/F1, so the
    averages reflect end-to-end recovery, not just the feasible subset.
    Per-cascade derived seeds keep results reproducible and independent of
    iteration order.
    """
    rows = []
    for rate in drop_rates:
        stats = {"success": 0.0, "precision": 0.0, "recall": 0.0, "f1": 0.0}
        n = 0
        for cascade in cs.cascades:
            if cascade.size < 2:
                continue
            rng = random.Random(f"{seed}:hide:{rate}:{cascade.id}")
            result = complete(g, hide(cascade, rate, rng), clock)
            stats["success"] += result.feasible
            stats["precision"] += result.precision
            stats["recall"] += result.recall
            stats["f1"] += result.f1
            n += 1
        if n == 0:
            raise ValueError("no cascade has at least 2 activations")
        rows.append(
            {
                "drop_rate": rate,
                "success_rate": stats["success"] / n,
                "precision": stats["precision"] / n,
                "recall": stats["recall"] / n,
                "f1": stats["f1"] / n,
            }
        )
    return rows


def write_completion_csv(rows: list[dict[str, float]], path: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["drop_rate", "success_rate", "precision", "recall", "f1"]
        )
        writer.writeheader()
        writer.writerows(rows)
