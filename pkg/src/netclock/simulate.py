"""Synthetic data: scale-free graphs, cascade sampling, timeline stretching.

The stretch transformation hides a known clock inside the data: each
original tick expands to a random-length interval (geometric lengths with a
configured mean) and its activations scatter uniformly inside it.  Interval
order preserves the relative order of non-simultaneous activations, and the
hidden clock is returned so recovery can be measured.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .cascades import Activation, Cascade, CascadeSet
from .clock import Clock, clock_min
from .graph import Graph, load_graph
from .likelihood import ICParams


@dataclass(frozen=True)
class SimConfig:
    nodes: int = 1000
    attachment: int = 2  # new edges per node; mean degree ~2*attachment
    params: ICParams = field(default_factory=ICParams)
    min_cascade_size: int = 30
    cascade_count: int = 5000
    stretch_mean: float = 1.0
    rng_seed: int = 0
    max_steps: int = 60
    retry_cap: int = 2000

    def __post_init__(self) -> None:
        if self.nodes < 3 or self.attachment < 1:
            raise ValueError("need >= 3 nodes and attachment >= 1")
        if self.min_cascade_size < 1 or self.cascade_count < 1:
            raise ValueError("cascade counts must be positive")
        if self.stretch_mean < 1:
            raise ValueError("stretch_mean must be >= 1")


def generate_graph(cfg: SimConfig) -> Graph:
    """Preferential-attachment graph with every edge directed both ways.

    Starts from a clique on attachment+1 nodes; each new node attaches to
    ``attachment`` distinct existing nodes sampled proportionally to degree.
    """
    rng = random.Random(f"{cfg.rng_seed}:graph")
    m = cfg.attachment
    undirected: list[tuple[int, int]] = []
    repeated: list[int] = []
    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            undirected.append((u, v))
            repeated.extend((u, v))
    for new in range(m + 1, cfg.nodes):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(repeated[rng.randrange(len(repeated))])
        for v in sorted(targets):
            undirected.append((new, v))
            repeated.extend((new, v))
    edges = [(u, v) for u, v in undirected] + [(v, u) for u, v in undirected]
    return load_graph(edges)


def sample_cascade(
    g: Graph,
    p: ICParams,
    start_node: int | list[int],
    max_steps: int,
    rng: random.Random,
    spontaneous: bool = False,
) -> list[Activation]:
    """One independent-cascade run; returns (node, time) pairs, seeds at t=1.

    At each step a node with c newly-activated in-neighbors activates with
    probability 1 - (1-p_e)(1-p_n)^c when spontaneous activation is enabled,
    and 1 - (1-p_n)^c otherwise (so sampled cascades stay connected).
    """
    seeds = [start_node] if isinstance(start_node, int) else sorted(set(start_node))
    for s in seeds:
        if not 0 <= s < g.node_count:
            raise ValueError(f"start node {s} out of range")
    active: dict[int, int] = {s: 1 for s in seeds}
    newly = list(seeds)
    q_e = 1.0 - p.p_e if spontaneous else 1.0
    q_n = 1.0 - p.p_n
    for t in range(2, max_steps + 1):
        if spontaneous:
            candidates = sorted(set(range(g.node_count)) - active.keys())
        else:
            candidates = sorted(
                {w for u in newly for w in g.out_adj[u] if w not in active}
            )
        if not candidates and not spontaneous:
            break
        newly_set = set(newly)
        next_newly = []
        for w in candidates:
            c = sum(1 for u in g.in_adj[w] if u in newly_set)
            if not spontaneous and c == 0:
                continue
            if rng.random() < 1.0 - q_e * q_n**c:
                next_newly.append(w)
        for w in next_newly:
            active[w] = t
        newly = next_newly
        if not newly and not spontaneous:
            break
    return [Activation(node, t) for node, t in sorted(active.items())]


def generate_cascades(cfg: SimConfig, g: Graph) -> CascadeSet:
    """Sample ``cascade_count`` cascades of at least ``min_cascade_size``.

    Start nodes are drawn degree-weighted (well-connected users seed most
    observable diffusion); undersized runs are rejected and resampled with a
    fresh derived stream, bounded by ``retry_cap`` attempts per cascade.
    """
    weighted = [u for u in range(g.node_count) for _ in g.out_adj[u]]
    cascades = []
    total = 0
    for cid in range(cfg.cascade_count):
        acts = None
        for attempt in range(cfg.retry_cap):
            rng = random.Random(f"{cfg.rng_seed}:cascade:{cid}:{attempt}")
            start = weighted[rng.randrange(len(weighted))]
            run = sample_cascade(g, cfg.params, start, cfg.max_steps, rng)
            if len(run) >= cfg.min_cascade_size:
                acts = run
                break
        if acts is None:
            raise RuntimeError(
                f"cascade {cid}: no run reached size {cfg.min_cascade_size} "
                f"in {cfg.retry_cap} attempts"
            )
        acts = sorted(acts, key=lambda a: (a.time, a.node))
        total += len(acts)
        cascades.append(
            Cascade(id=cid, activations=tuple(acts), time_of={a.node: a.time for a in acts})
        )
    horizon = max(a.time for c in cascades for a in c.activations)
    return CascadeSet(
        cascades=tuple(cascades), horizon=horizon, total_activations=total
    )


def stretch(
    cs: CascadeSet, stretch_mean: float, rng: random.Random
) -> tuple[CascadeSet, Clock]:
    """Expand each tick into a random interval and scatter its activations.

    Returns the stretched dataset and the hidden ground-truth clock whose
    i-th interval hosts everything from original tick i.  A mean of 1 is
    the identity and the hidden clock is the original timeline.
    """
    if stretch_mean < 1:
        raise ValueError("stretch_mean must be >= 1")
    if cs.total_activations == 0:
        return cs, clock_min(cs.horizon)
    lengths = [_geometric(rng, stretch_mean) for _ in range(cs.horizon)]
    starts = [1] * cs.horizon
    for i in range(1, cs.horizon):
        starts[i] = starts[i - 1] + lengths[i - 1]

    cascades = []
    max_t = 1
    for c in cs.cascades:
        acts = []
        for a in c.activations:
            lo = starts[a.time - 1]
            hi = lo + lengths[a.time - 1] - 1
            t = rng.randint(lo, hi)
            max_t = max(max_t, t)
            acts.append(Activation(a.node, t))
        acts = sorted(acts, key=lambda a: (a.time, a.node))
        cascades.append(
            Cascade(id=c.id, activations=tuple(acts), time_of={a.node: a.time for a in acts})
        )
    boundaries = tuple(s for s in starts[1:] if s <= max_t)
    return (
        CascadeSet(
            cascades=tuple(cascades),
            horizon=max_t,
            total_activations=cs.total_activations,
            time_offset=cs.time_offset,
        ),
        Clock(max_t, boundaries),
    )


def _geometric(rng: random.Random, mean: float) -> int:
    """Geometric length on {1, 2, ...} with the given mean."""
    if mean <= 1.0:
        return 1
    q = 1.0 - 1.0 / mean  # failure probability
    return 1 + int(math.log(1.0 - rng.random()) / math.log(q))
