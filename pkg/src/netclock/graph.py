"""Directed graph with dense integer node ids and adjacency in both directions.

Nodes are integers 0..node_count-1.  Both the out- and in-adjacency are
stored so that in-neighbor queries (the influencer lookups that dominate
all likelihood computations) are O(degree) without a scan.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Graph:
    """Immutable directed graph.

    ``out_adj[u]`` / ``in_adj[v]`` are sorted tuples of neighbor ids.
    Safe to share between workers; all mutation happens in ``load_graph``.
    """

    node_count: int
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        self._check_node(v)
        return self.out_adj[v]

    def in_neighbors(self, v: int) -> set[int]:
        """Set of nodes u with an edge u -> v (the potential influencers of v)."""
        self._check_node(v)
        return set(self.in_adj[v])

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, nbrs in enumerate(self.out_adj):
            for v in nbrs:
                yield u, v

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise ValueError(f"node {v} out of range [0, {self.node_count})")


def load_graph(edge_list: Sequence[tuple[int, int]]) -> Graph:
    """Build a :class:`Graph` from (src, dst) pairs.

    Self-loops and duplicate edges are rejected with the index of the
    offending pair: a node cannot influence itself across time steps, and a
    duplicate edge would silently double an influencer count.
    """
    seen: set[tuple[int, int]] = set()
    max_id = -1
    for i, (u, v) in enumerate(edge_list):
        if u < 0 or v < 0:
            raise ValueError(f"negative node id in edge ({u}, {v}) at index {i}")
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) at index {i}")
        if (u, v) in seen:
            raise ValueError(f"duplicate edge ({u}, {v}) at index {i}")
        seen.add((u, v))
        max_id = max(max_id, u, v)

    n = max_id + 1
    out: list[list[int]] = [[] for _ in range(n)]
    inn: list[list[int]] = [[] for _ in range(n)]
    for u, v in seen:
        out[u].append(v)
        inn[v].append(u)
    return Graph(
        node_count=n,
        out_adj=tuple(tuple(sorted(a)) for a in out),
        in_adj=tuple(tuple(sorted(a)) for a in inn),
    )


def read_edge_lines(lines: Iterable[str]) -> list[tuple[str, str]]:
    """Parse edge-list text: one ``src<TAB>dst`` pair per line.

    Lines starting with ``#`` and blank lines are skipped.  Ids are returned
    as strings; callers map them to dense integers (see the CLI).
    """
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'src<TAB>dst', got {raw!r}")
        edges.append((parts[0], parts[1]))
    return edges
