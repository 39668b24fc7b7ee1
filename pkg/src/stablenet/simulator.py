"""Asynchronous routing semantics and fair schedule generation.

A schedule is a pair (alpha, beta): ``alpha[t, i]`` says node ``i`` is active
at time ``t`` and ``beta[j, t]`` is the time at which the route received
over edge ``j`` at time ``t`` was sent.  The state of an active node is its
initial route merged with what it hears from every in-neighbour; an inactive
node keeps its previous state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expr import eval_predicate
from .network import Network, apply_transfer
from .route import route_to_json


class ScheduleViolation(ValueError):
    pass


class InfeasibleProfile(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    nodes: tuple
    edges: tuple
    alpha: np.ndarray  # bool, shape (horizon + 1, |V|)
    beta: np.ndarray  # int, shape (|E|, horizon + 1)

    @property
    def horizon(self) -> int:
        return self.alpha.shape[0] - 1

    def check(self) -> None:
        T = self.horizon
        if self.alpha.shape != (T + 1, len(self.nodes)):
            raise ScheduleViolation(f"alpha has shape {self.alpha.shape}")
        if self.beta.shape != (len(self.edges), T + 1):
            raise ScheduleViolation(f"beta has shape {self.beta.shape}")
        if T == 0:
            return
        t = np.arange(1, T + 1)
        b = self.beta[:, 1:]
        bad = np.argwhere((b >= t) | (b < 0))
        if len(bad):
            j, i = bad[0]
            raise ScheduleViolation(
                f"edge {self.edges[j]} reads time {int(b[j, i])} at time {i + 1}")


@dataclass(frozen=True)
class FairnessProfile:
    ea_period: int = 3
    ef_lag: int = 3
    failed_edges: frozenset = frozenset()
    cutoff: int = 0

    def __post_init__(self):
        object.__setattr__(self, "failed_edges", frozenset(tuple(e) for e in self.failed_edges))


def synchronous_schedule(net: Network, horizon: int) -> Schedule:
    alpha = np.ones((horizon + 1, len(net.nodes)), dtype=bool)
    beta = np.tile(np.arange(-1, horizon), (len(net.edges), 1))
    beta[:, 0] = 0
    return Schedule(tuple(net.nodes), tuple(net.edges), alpha, beta)


def random_fair_schedule(net: Network, seed: int, horizon: int,
                         profile: FairnessProfile = FairnessProfile()) -> Schedule:
    """A seeded schedule meeting bounded activation, staleness and ordering.

    Every node is active at least once in every window of ``ea_period``
    steps; every non-failed edge satisfies ``t - ef_lag <= beta(t) < t``;
    beta is monotone.  Failed edges stop advancing after ``cutoff``.
    """
    ea, ef = profile.ea_period, profile.ef_lag
    if ea < 1 or ef < 1:
        raise InfeasibleProfile("eaPeriod and efLag must be at least 1")
    if horizon < 0:
        raise InfeasibleProfile("horizon must be non-negative")
    if horizon and horizon < max(ea, ef):
        raise InfeasibleProfile(f"horizon {horizon} shorter than the fairness bounds")
    unknown = profile.failed_edges - set(net.edges)
    if unknown:
        raise InfeasibleProfile(f"failed edges not in network: {sorted(unknown)}")
    rng = np.random.default_rng(seed)
    n, m = len(net.nodes), len(net.edges)
    alpha = np.zeros((horizon + 1, n), dtype=bool)
    last = np.zeros(n, dtype=int)
    for t in range(1, horizon + 1):
        row = rng.random(n) < 0.5
        row |= (t - last) >= ea
        alpha[t] = row
        last[row] = t
    beta = np.zeros((m, horizon + 1), dtype=int)
    for t in range(1, horizon + 1):
        lo = np.maximum(beta[:, t - 1], max(t - ef, 0))
        beta[:, t] = lo + (rng.random(m) * (t - lo)).astype(int)
    for j, e in enumerate(net.edges):
        if e in profile.failed_edges:
            c = min(max(profile.cutoff, 0), horizon)
            beta[j, c + 1:] = beta[j, c]
    return Schedule(tuple(net.nodes), tuple(net.edges), alpha, beta)


@dataclass(frozen=True)
class Trace:
    nodes: tuple
    states: dict = field(default_factory=dict)  # node -> list of routes over time

    @property
    def horizon(self) -> int:
        return len(next(iter(self.states.values()))) - 1 if self.states else 0

    def __getitem__(self, key):
        v, t = key
        return self.states[v][t]

    def to_json(self) -> dict:
        return {v: [route_to_json(r) for r in self.states[v]] for v in self.nodes}


def run(net: Network, sched: Schedule) -> Trace:
    sched.check()
    if tuple(sched.nodes) != tuple(net.nodes) or tuple(sched.edges) != tuple(net.edges):
        raise ScheduleViolation("schedule was built for a different network")
    T = sched.horizon
    idx = {e: j for j, e in enumerate(net.edges)}
    states = {v: [net.init[v]] for v in net.nodes}
    for t in range(1, T + 1):
        for i, v in enumerate(net.nodes):
            if not sched.alpha[t, i]:
                states[v].append(states[v][t - 1])
                continue
            best = net.init[v]
            for u in net.in_neighbors(v):
                e = (u, v)
                sent = states[u][int(sched.beta[idx[e], t])]
                best = net.merge(best, apply_transfer(e, sent, net))
            states[v].append(best)
    return Trace(tuple(net.nodes), states)


def convergence_bound(net: Network, profile: FairnessProfile) -> int:
    """Steps after which every node of a verified network is inside Q.

    Once a sender is inside Q for good, the receiver reads a fresh enough
    state within ``ef_lag`` steps and is activated within ``ea_period``
    more, so each CB-edge hop costs at most ``ea_period + ef_lag`` steps and
    no CB-path has more than ``|V| - 1`` hops.  Concrete routes may keep
    changing after this point; only membership in Q is guaranteed.
    """
    return (len(net.nodes) + 1) * (profile.ea_period + profile.ef_lag)


def check_abstract_convergence(trace: Trace, Q, tail: int) -> dict:
    T = trace.horizon
    if tail > T:
        raise ValueError(f"tail {tail} exceeds horizon {T}")
    return {v: all(eval_predicate(Q[v], r) for r in trace.states[v][T - tail:])
            for v in trace.nodes}


def quiescent(trace: Trace, tail: int) -> bool:
    """No node changed state during the final *tail* steps."""
    T = trace.horizon
    return all(len(set(trace.states[v][T - tail:])) == 1 for v in trace.nodes)


def check_invariant(trace: Trace, I) -> list:
    """All ``(node, time)`` points whose state leaves ``I``."""
    return [(v, t) for v in trace.nodes for t, r in enumerate(trace.states[v])
            if not eval_predicate(I[v], r)]


# -- fairness classification ---------------------------------------------------

@dataclass(frozen=True)
class EdgeFairness:
    ed: bool
    ef: bool
    do: bool


@dataclass(frozen=True)
class FairnessReport:
    deadline: int
    edges: dict
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def classify_edge(beta: np.ndarray, d: int) -> EdgeFairness:
    """Bounded fairness of one edge with deadline *d* over the horizon.

    ED: every send time T' <= H - d is delivered, i.e. some t in
    [T', T' + d] has beta(t) >= T'.  EF: after T' + d every delivery is at
    least as fresh as T'.  DO: beta is monotone.
    """
    H = len(beta) - 1
    b = beta[1:]
    do = bool(np.all(np.diff(b) >= 0)) if len(b) > 1 else True
    ed = ef = True
    for tp in range(0, H - d + 1):
        window = beta[max(tp, 1):tp + d + 1]
        if not np.any(window >= tp):
            ed = False
        if np.any(beta[max(tp + d, 1):] < tp):
            ef = False
    return EdgeFairness(ed, ef, do)


def fairness_lemma_check(sched: Schedule, deadline: int | None = None) -> FairnessReport:
    """Classify each edge and check EF => ED and ED and DO => EF."""
    d = deadline if deadline is not None else max(1, sched.horizon // 4)
    out, bad = {}, []
    for j, e in enumerate(sched.edges):
        c = classify_edge(sched.beta[j], d)
        out[e] = c
        if c.ef and not c.ed:
            bad.append((e, "EF without ED"))
        if c.ed and c.do and not c.ef:
            bad.append((e, "ED and DO without EF"))
    return FairnessReport(d, out, tuple(bad))
