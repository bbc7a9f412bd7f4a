"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

from .cascades import CascadeSet, load_cascades
from .graph import Graph


def ensure_graph(graph) -> Graph:
    if not isinstance(graph, Graph):
        raise TypeError(
            f"expected a Graph (see netclock.load_graph), got {type(graph).__name__}"
        )
    return graph


def ensure_cascade_set(X, graph: Graph) -> CascadeSet:
    """Accept a CascadeSet or raw (cascade_id, node, time) records."""
    if isinstance(X, CascadeSet):
        return X
    try:
        records = [(int(c), int(v), int(t)) for c, v, t in X]
    except (TypeError, ValueError) as exc:
        raise TypeError(
            "X must be a CascadeSet or an iterable of (cascade_id, node, time) "
            f"records: {exc}"
        ) from None
    return load_cascades(records, graph)


def ensure_probability(name: str, value: float) -> float:
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must be in (0, 1), got {value}")
    return value
