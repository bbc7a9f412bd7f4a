"""Near-linear greedy single-clock solver.

Starting from the single-interval clock, repeat: sweep the candidate cut
positions (one immediately before each distinct activation time) in
increasing order, score each position's exact single-cut gain against the
frozen pre-sweep clock, collect a batch of positive-gain cuts that share no
active edge, apply the batch, and stop when a sweep accepts nothing.

Edge-disjointness is what makes a batch sound: two cuts interact only
through an in-cascade edge whose source precedes the earlier cut and whose
target follows the later one, i.e. an active edge spanning both.  For the
remaining (inactive-target) penalty terms, a disjoint batch can only score
better jointly than the sum of its parts, so the objective never decreases.

Scoring is incremental.  Within one interval of the frozen clock, walking
the candidate position left to right moves source activations into the
left half one tick at a time; each move touches only that source's
out-neighbors, grouped by target so the non-additive activation likelihood
stays exact.  A whole sweep costs O(total activations x avg degree).
"""
from __future__ import annotations

from dataclasses import dataclass

from .cascades import CascadeSet, tick_activations
from .clock import Clock, clock_max
from .graph import Graph
from .likelihood import ICParams, LogTables, improvement, validate_policy

ACCEPT_EPS = 1e-12


@dataclass(frozen=True)
class ActiveEdge:
    """A graph edge whose endpoints both activate in a cascade, in order."""

    cascade_id: int
    source: int
    target: int
    time_source: int
    time_target: int

    def spans(self, position: int) -> bool:
        """True if a cut at ``position`` separates source from target."""
        return self.time_source < position <= self.time_target

    def cut_count(self, clock: Clock) -> int:
        """Number of existing cuts between the two activations."""
        return sum(1 for b in clock.boundaries if self.spans(b))


@dataclass(frozen=True)
class CutCandidate:
    position: int
    score: float


def build_active_edges(g: Graph, cs: CascadeSet) -> list[ActiveEdge]:
    """All (edge, cascade) pairs whose source activates strictly first."""
    edges = []
    for cascade in cs.cascades:
        time_of = cascade.time_of
        for a in cascade.activations:
            for w in g.out_adj[a.node]:
                tw = time_of.get(w)
                if tw is not None and tw > a.time:
                    edges.append(
                        ActiveEdge(cascade.id, a.node, w, a.time, tw)
                    )
    return edges


def spanning_edges(edges: list[ActiveEdge], position: int) -> set[int]:
    """Indices of the active edges a cut at ``position`` would separate."""
    return {i for i, e in enumerate(edges) if e.spans(position)}


def add_or_drop(
    accepted: list[CutCandidate],
    candidate: CutCandidate,
    conflicts: "callable[[int, int], bool]",
) -> bool:
    """Keep the accepted batch edge-disjoint and never worth less.

    The candidate displaces conflicting members only if it outscores them
    combined; with interval geometry at most one member can conflict, but
    the rule is stated for several to be safe.
    """
    removed: list[CutCandidate] = []
    while accepted and conflicts(accepted[-1].position, candidate.position):
        removed.append(accepted.pop())
    if candidate.score > sum(r.score for r in removed):
        accepted.append(candidate)
        return True
    accepted.extend(reversed(removed))
    return False


def solve_oc_greedy(
    g: Graph,
    cs: CascadeSet,
    p: ICParams,
    policy: str = "contagious_only",
    condition: dict[tuple[int, int], float] | None = None,
) -> tuple[Clock, float]:
    """Greedy clock and its improvement (exact, recomputed at the end).

    With ``condition`` set, the objective is the conditioned activation-only
    marginal used by the multi-clock greedy, and the returned value is that
    objective's total for the final clock.
    """
    validate_policy(policy)
    T = cs.horizon
    if cs.total_activations == 0 or T == 1:
        return clock_max(T), 0.0

    tab = LogTables(p)
    ticks = tick_activations(cs)
    time_of = {c.id: c.time_of for c in cs.cascades}
    positions = [t for t in range(2, T + 1) if ticks[t - 1]]

    # conflict oracle: spanmax[p] = latest target time over active edges with
    # source time <= p; cuts t' < t share an active edge iff spanmax[t'-1] >= t
    spanmax = [0] * (T + 1)
    for cascade in cs.cascades:
        casc_times = cascade.time_of
        for a in cascade.activations:
            for w in g.out_adj[a.node]:
                tw = casc_times.get(w)
                if tw is not None and tw > a.time:
                    if tw > spanmax[a.time]:
                        spanmax[a.time] = tw
    for t in range(1, T + 1):
        spanmax[t] = max(spanmax[t], spanmax[t - 1])

    def conflicts(earlier: int, later: int) -> bool:
        return spanmax[earlier - 1] >= later

    prefix = [0] * (T + 1)
    for t in range(1, T + 1):
        prefix[t] = prefix[t - 1] + len(ticks[t - 1])

    boundaries: set[int] = set()
    for _ in range(len(positions) + 1):
        clock = Clock(T, tuple(boundaries))
        accepted = _sweep(
            g, cs, clock, tab, policy, condition, ticks, time_of, positions,
            prefix, conflicts,
        )
        if not accepted:
            break
        boundaries.update(c.position for c in accepted)
    else:
        raise RuntimeError("sweep loop failed to terminate")

    final = Clock(T, tuple(boundaries))
    if condition is None:
        return final, improvement(g, cs, final, p, policy)
    return final, _conditioned_value(g, cs, final, tab, condition)


def _sweep(
    g: Graph,
    cs: CascadeSet,
    clock: Clock,
    tab: LogTables,
    policy: str,
    condition: dict[tuple[int, int], float] | None,
    ticks: list[list[tuple[int, int]]],
    time_of: dict[int, dict[int, int]],
    positions: list[int],
    prefix: list[int],
    conflicts,
) -> list[CutCandidate]:
    accepted: list[CutCandidate] = []
    cut = set(clock.boundaries)
    ivs = clock.intervals
    idx = 0
    state: _IntervalState | None = None
    bulk = policy == "full" and condition is None
    n_inactive_base = len(cs.cascades) * g.node_count
    for t in positions:
        if t in cut:
            continue
        while ivs[idx][1] < t:
            idx += 1
        if state is None or state.index != idx:
            state = _IntervalState(
                g, ticks, time_of, ivs, idx, tab, policy, condition
            )
        state.advance(t)
        score = state.score()
        if bulk:
            score += (n_inactive_base - prefix[t - 1]) * tab.ln_1pe
        if score > ACCEPT_EPS:
            add_or_drop(accepted, CutCandidate(t, score), conflicts)
    return accepted


class _IntervalState:
    """Incremental single-cut scores for candidates inside one interval.

    For a cut at position t splitting [s, e] into A=[s, t-1] and B=[t, e],
    the affected terms group by target:

    * activations in B: their contagious window shifts from the previous
      interval to A, and they gain a non-activation term over A;
    * activations in the next interval: their window shrinks from [s, e]
      to B;
    * targets inactive past the next interval (or absent): non-activation
      terms are re-split between A, B and the next interval.

    Walking t to the right moves sources into A (bumping target counts) and
    drops targets that fall out of B; each activation is touched O(degree)
    times per sweep.
    """

    def __init__(self, g, ticks, time_of, ivs, index, tab, policy, condition):
        self.index = index
        self.tab = tab
        self.policy = policy
        self.conditioned = condition is not None
        self.prior = condition or {}
        self.ticks = ticks
        s, e = ivs[index]
        self.start, self.end = s, e
        prev = ivs[index - 1] if index > 0 else None
        nxt = ivs[index + 1] if index + 1 < len(ivs) else None
        self.next_end = nxt[1] if nxt else None

        # contagious counts w.r.t. the previous interval, for targets in [s, e]
        c_prev: dict[tuple[int, int], int] = {}
        if prev is not None:
            for tick in range(prev[0], prev[1] + 1):
                for cid, u in ticks[tick - 1]:
                    casc_times = time_of[cid]
                    for w in g.out_adj[u]:
                        tw = casc_times.get(w)
                        if tw is not None and s <= tw <= e:
                            key = (cid, w)
                            c_prev[key] = c_prev.get(key, 0) + 1

        # per-target state and per-source update lists
        self.g1: dict[tuple[int, int], list[int]] = {}  # [c_prev, cA]
        self.g2: dict[tuple[int, int], list[int]] = {}  # [c_full, cA]
        self.g3: dict[tuple[int, int], list[int]] = {}  # [c_full, cA]
        self.links: dict[tuple[int, int], list[tuple[int, tuple[int, int]]]] = {}
        for tick in range(s, e + 1):
            for cid, u in ticks[tick - 1]:
                self.g1[(cid, u)] = [c_prev.get((cid, u), 0), 0]
        for tick in range(s, e + 1):
            for cid, u in ticks[tick - 1]:
                casc_times = time_of[cid]
                out = []
                for w in g.out_adj[u]:
                    tw = casc_times.get(w)
                    if tw is not None and tw <= tick:
                        continue
                    key = (cid, w)
                    if tw is not None and tw <= e:
                        out.append((0, key))
                    elif tw is not None and self.next_end is not None and tw <= self.next_end:
                        rec = self.g2.get(key)
                        if rec is None:
                            rec = self.g2[key] = [0, 0]
                        rec[0] += 1
                        out.append((1, key))
                    else:
                        rec = self.g3.get(key)
                        if rec is None:
                            rec = self.g3[key] = [0, 0]
                        rec[0] += 1
                        out.append((2, key))
                if out:
                    self.links[(cid, u)] = out

        self.s1_new = 0.0
        self.s1_old = 0.0
        self.s1_non = 0.0
        for key, (cp, _) in self.g1.items():
            self.s1_new += self._act_val(key, 0)
            self.s1_old += self._act_val(key, cp)
            self.s1_non += self._non_val(cp)
        self.s2_new = 0.0
        self.s2_old = 0.0
        self.s2_non = 0.0
        for key, (cf, _) in self.g2.items():
            v = self._act_val(key, cf)
            self.s2_new += v
            self.s2_old += v
        # Inactive targets split their non-activation terms at the cut.  With
        # a successor interval the per-count parts cancel (cA + cB = cf) and
        # only the existence constant moves: one extra term whenever sources
        # land on both sides.  In the last interval there is no successor
        # term to rebalance against, so the right half's term is new in full.
        self.split3 = 0
        self.s3_tail = 0.0
        self.last = s - 1

    def _act_val(self, key: tuple[int, int], c: int) -> float:
        if self.conditioned:
            gain = self.tab.act(c) - self.tab.act(0) - self.prior.get(key, 0.0)
            return gain if gain > 0.0 else 0.0
        return self.tab.act(c)

    def _non_val(self, c: int) -> float:
        if self.conditioned or self.policy == "none" or c == 0:
            return 0.0
        if self.policy == "contagious_only":
            return self.tab.non(c)
        return c * self.tab.ln_1pn  # full: per-node constant is in the bulk

    def advance(self, t: int) -> None:
        for tick in range(self.last + 1, t):
            for cid, u in self.ticks[tick - 1]:
                key = (cid, u)
                rec = self.g1.pop(key, None)
                if rec is not None:  # target falls out of B
                    cp, ca = rec
                    self.s1_new -= self._act_val(key, ca)
                    self.s1_old -= self._act_val(key, cp)
                    self.s1_non -= self._non_val(cp)
                for kind, tkey in self.links.get(key, ()):
                    if kind == 0:
                        trec = self.g1.get(tkey)
                        if trec is None:
                            continue
                        ca = trec[1] = trec[1] + 1
                        self.s1_new += self._act_val(tkey, ca) - self._act_val(
                            tkey, ca - 1
                        )
                    elif kind == 1:
                        trec = self.g2[tkey]
                        cf = trec[0]
                        ca = trec[1] = trec[1] + 1
                        self.s2_new += self._act_val(tkey, cf - ca) - self._act_val(
                            tkey, cf - ca + 1
                        )
                        self.s2_non += self._non_val(ca) - self._non_val(ca - 1)
                    else:
                        trec = self.g3[tkey]
                        cf = trec[0]
                        ca = trec[1] = trec[1] + 1
                        if self.next_end is None:
                            self.s3_tail += self._non_val(ca) - self._non_val(ca - 1)
                        else:
                            self.split3 += int(0 < ca < cf) - int(0 < ca - 1 < cf)
        self.last = t - 1

    def score(self) -> float:
        total = self.s1_new - self.s1_old + self.s1_non
        total += self.s2_new - self.s2_old + self.s2_non + self.s3_tail
        if self.policy == "contagious_only" and not self.conditioned:
            total += self.split3 * self.tab.ln_1pe
        return total


def _conditioned_value(
    g: Graph,
    cs: CascadeSet,
    clock: Clock,
    tab: LogTables,
    prior: dict[tuple[int, int], float],
) -> float:
    total = 0.0
    for cascade in cs.cascades:
        idx_of = {node: clock.remap_time(t) for node, t in cascade.time_of.items()}
        for a in cascade.activations:
            i = idx_of[a.node]
            if i == 1:
                continue
            c = sum(1 for u in g.in_adj[a.node] if idx_of.get(u) == i - 1)
            if c:
                gain = tab.act(c) - tab.act(0) - prior.get((cascade.id, a.node), 0.0)
                if gain > 0.0:
                    total += gain
    return total
