"""Estimator front-end so clock detection composes with sklearn pipelines.

``ClockDetector`` is a transformer: ``fit`` learns the timeline partition
that maximizes cascade likelihood, ``transform`` remaps activation times to
the learned steps.  ``MultiClockDetector`` learns k clocks plus a node
assignment and predicts the clock index per node.
``CascadeSizeFeaturizer`` turns prefixes of cascades into a feature matrix.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cascades import Activation, Cascade, CascadeSet, compress_timeline
from .clock import Clock
from .dp import solve_oc_dp
from .greedy import solve_oc_greedy
from .likelihood import ICParams, total_loglik
from .multiclock import solve_koc
from .oracle import oracle_oc
from .apps.features import FEATURE_NAMES, extract_size_features
from .validation import ensure_cascade_set, ensure_graph

_SOLVERS = {
    "dp": solve_oc_dp,
    "greedy": solve_oc_greedy,
    "oracle": oracle_oc,
}


class ClockDetector(BaseEstimator, TransformerMixin):
    """Learn the heterogeneous aggregation clock of a cascade dataset.

    Parameters
    ----------
    graph : Graph
        Directed graph the cascades spread on.
    p_e, p_n : float
        Spontaneous and neighbor activation probabilities.
    algorithm : {"greedy", "dp", "oracle"}
        Solver; "dp" is exact with cubic cost in the compressed horizon,
        "oracle" enumerates and is for tiny instances only.
    policy : {"contagious_only", "full", "none"}
        Non-activation term policy of the objective.
    compress : bool
        Drop empty ticks before solving (recommended).

    Attributes
    ----------
    clock_ : Clock
        Learned clock on the fit data's timeline.
    improvement_ : float
        Log-likelihood gain over the single-interval clock.
    log_likelihood_, baseline_log_likelihood_ : float
        Absolute values under the learned and the single-interval clock.
    """

    def __init__(
        self,
        graph=None,
        p_e: float = 0.001,
        p_n: float = 0.1,
        algorithm: str = "greedy",
        policy: str = "contagious_only",
        compress: bool = True,
    ):
        self.graph = graph
        self.p_e = p_e
        self.p_n = p_n
        self.algorithm = algorithm
        self.policy = policy
        self.compress = compress

    def fit(self, X, y=None):
        g = ensure_graph(self.graph)
        cs = ensure_cascade_set(X, g)
        if self.algorithm not in _SOLVERS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; expected one of "
                f"{sorted(_SOLVERS)}"
            )
        params = ICParams(self.p_e, self.p_n)
        work = compress_timeline(cs) if self.compress else cs
        clock, value = _SOLVERS[self.algorithm](g, work, params, self.policy)
        self.clock_ = _expand_clock(work, clock, cs.horizon)
        self.improvement_ = value
        self.baseline_log_likelihood_ = total_loglik(
            g, cs, Clock(cs.horizon), params, self.policy
        )
        self.log_likelihood_ = self.baseline_log_likelihood_ + value
        self.n_intervals_ = self.clock_.n_intervals
        return self

    def transform(self, X):
        """Remap activation times to learned step indices.

        Returns a new :class:`CascadeSet` whose horizon is the number of
        learned intervals.
        """
        check_is_fitted(self, "clock_")
        g = ensure_graph(self.graph)
        cs = ensure_cascade_set(X, g)
        if cs.horizon > self.clock_.horizon:
            raise ValueError(
                f"data horizon {cs.horizon} exceeds fitted horizon "
                f"{self.clock_.horizon}"
            )
        return remap_cascades(cs, self.clock_)


class MultiClockDetector(BaseEstimator):
    """Learn up to k clocks and the per-node clock assignment."""

    def __init__(
        self,
        graph=None,
        k: int = 2,
        p_e: float = 0.001,
        p_n: float = 0.1,
        inner: str = "dp",
        compress: bool = True,
    ):
        self.graph = graph
        self.k = k
        self.p_e = p_e
        self.p_n = p_n
        self.inner = inner
        self.compress = compress

    def fit(self, X, y=None):
        g = ensure_graph(self.graph)
        cs = ensure_cascade_set(X, g)
        params = ICParams(self.p_e, self.p_n)
        work = compress_timeline(cs) if self.compress else cs
        solution = solve_koc(g, work, self.k, params, inner=self.inner)
        self.clocks_ = tuple(
            _expand_clock(work, c, cs.horizon) for c in solution.clocks
        )
        self.assignment_ = dict(solution.assignment)
        self.per_clock_gain_ = list(solution.per_clock_gain)
        self.total_improvement_ = solution.total
        return self

    def predict(self, nodes) -> np.ndarray:
        """Clock index assigned to each node."""
        check_is_fitted(self, "clocks_")
        return np.array([self.assignment_[int(v)] for v in nodes], dtype=int)


class CascadeSizeFeaturizer(BaseEstimator, TransformerMixin):
    """Prefix features for size prediction, under a given clock.

    ``transform`` returns an (n_cascades, 5) float matrix; the matching
    growth labels and cascade ids land in ``labels_`` and ``cascade_ids_``.
    With no clock set, times are used as-is.
    """

    def __init__(self, clock=None, m: int = 10, alpha: float = 1.5):
        self.clock = clock
        self.m = m
        self.alpha = alpha

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        if not isinstance(X, CascadeSet):
            raise TypeError("CascadeSizeFeaturizer expects a CascadeSet")
        clock = self.clock if self.clock is not None else Clock(
            X.horizon, tuple(range(2, X.horizon + 1))
        )
        rows = extract_size_features(X, clock, self.m, self.alpha)
        self.feature_names_ = list(FEATURE_NAMES)
        self.cascade_ids_ = [r.cascade_id for r in rows]
        self.labels_ = np.array([r.label for r in rows], dtype=bool)
        return np.array(
            [
                [r.time_to_mth, r.mean_gap, r.median_gap, r.max_gap, r.distinct_steps]
                for r in rows
            ],
            dtype=float,
        )


def remap_cascades(cs: CascadeSet, clock: Clock) -> CascadeSet:
    """New CascadeSet with every activation time replaced by its step index."""
    cascades = []
    total = 0
    horizon = 1
    for c in cs.cascades:
        acts = tuple(
            sorted(
                (Activation(a.node, clock.remap_time(a.time)) for a in c.activations),
                key=lambda a: (a.time, a.node),
            )
        )
        total += len(acts)
        horizon = max(horizon, acts[-1].time if acts else 1)
        cascades.append(
            Cascade(id=c.id, activations=acts, time_of={a.node: a.time for a in acts})
        )
    return CascadeSet(
        cascades=tuple(cascades), horizon=horizon, total_activations=total
    )


def _expand_clock(work: CascadeSet, clock: Clock, horizon: int) -> Clock:
    """Clock from the (possibly compressed) solve, on the fit data's timeline."""
    if work.original_times is None:
        if clock.horizon == horizon:
            return clock
        return Clock(horizon, clock.boundaries)
    boundaries = tuple(work.original_times[b - 1] for b in clock.boundaries)
    return Clock(horizon, boundaries)
