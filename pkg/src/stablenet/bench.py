"""Benchmark networks: the four-node running example and fat-tree suites.

Fat-tree naming: ``core{i}`` for the (k/2)^2 core switches, ``agg{p}_{j}`` and
``edge{p}_{j}`` for the k/2 aggregation and edge switches of pod ``p``.  Core
``i`` is wired to ``agg{p}_{i // (k/2)}`` in every pod and every edge switch
to every aggregation switch of its pod.  Links are bidirectional, so the
network has k^3 directed edges.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .expr import (
    DENY_ALL,
    NOT_NO_ROUTE,
    PERMIT_ALL,
    TRUE,
    Action,
    Clause,
    HasComm,
    Implies,
    IsNoRoute,
    LenCmp,
    LpCmp,
    Not,
    PrefixEq,
    Visited,
    conj,
    disj,
)
from .network import Interfaces, Network
from .route import DEFAULT_LP, NO_ROUTE, Route

VARIANTS = ("Reachability", "PathLength", "ValleyFree", "Hijack")
DOWN_TAG = "1:0"
HIJACKER = "hijacker"
INTERNAL_PREFIX = 0x0A000000
EXTERNAL_PREFIX = 0xC0A80000


class BadPods(ValueError):
    pass


@dataclass(frozen=True)
class FattreeSpec:
    pods: int
    variant: str = "Reachability"
    destination: str = "edge0_0"

    def __post_init__(self):
        if not isinstance(self.pods, int) or self.pods < 2 or self.pods % 2:
            raise BadPods(f"pods must be an even integer >= 2, got {self.pods!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")


def fattree_topology(k: int):
    """Nodes and the up/down link lists of a k-pod fat-tree."""
    if not isinstance(k, int) or k < 2 or k % 2:
        raise BadPods(f"pods must be an even integer >= 2, got {k!r}")
    h = k // 2
    cores = [f"core{i}" for i in range(h * h)]
    aggs = [f"agg{p}_{j}" for p in range(k) for j in range(h)]
    edges_ = [f"edge{p}_{j}" for p in range(k) for j in range(h)]
    up = []
    for p in range(k):
        for j in range(h):
            for a in range(h):
                up.append((f"edge{p}_{j}", f"agg{p}_{a}"))
    for i in range(h * h):
        for p in range(k):
            up.append((f"agg{p}_{i // h}", f"core{i}"))
    down = [(v, u) for u, v in up]
    return edges_ + aggs + cores, up, down


def dist(nodes, links, source) -> dict:
    """Hop distance from *source* over the given directed links (BFS)."""
    succ = {v: [] for v in nodes}
    for u, v in links:
        succ[u].append(v)
    out = {source: 0}
    todo = deque([source])
    while todo:
        u = todo.popleft()
        for v in succ[u]:
            if v not in out:
                out[v] = out[u] + 1
                todo.append(v)
    return out


def uphill(nodes, up_links, d) -> set:
    """Nodes reachable from *d* along up links only, *d* included."""
    return set(dist(nodes, up_links, d))


def hijack_route(seed: int | None = None) -> Route:
    """An adversarial origin announcement for the internal prefix."""
    if seed is None:
        return Route(prefix=INTERNAL_PREFIX, lp=1000, path_len=0)
    rng = np.random.default_rng(seed)
    return Route(prefix=INTERNAL_PREFIX, lp=int(rng.integers(0, 2000)),
                 path_len=int(rng.integers(0, 4)))


def gen_fattree(spec: FattreeSpec, hijack_seed: int | None = None):
    """Return ``(network, interfaces, dist)`` for one benchmark instance."""
    k = spec.pods
    nodes, up, down = fattree_topology(k)
    d = spec.destination
    if d not in nodes:
        raise ValueError(f"destination {d!r} is not a fat-tree node")
    links = up + down
    dmap = dist(nodes, links, d)
    origin = Route(prefix=INTERNAL_PREFIX, lp=DEFAULT_LP, path_len=0)
    init = {v: NO_ROUTE for v in nodes}
    init[d] = origin
    transfer = {e: PERMIT_ALL for e in links}
    comms: tuple = ()
    live = NOT_NO_ROUTE
    I, Q, Y = {}, {}, {}

    if spec.variant == "Reachability":
        for v in nodes:
            I[v], Q[v], Y[v] = TRUE, live, live

    elif spec.variant == "PathLength":
        for v in nodes:
            n = dmap[v]
            I[v] = Implies(live, conj(LpCmp("=", DEFAULT_LP), LenCmp(">=", n)))
            Q[v] = conj(live, LpCmp("=", DEFAULT_LP), LenCmp("=", n))
            Y[v] = conj(live, LenCmp("=", n))

    elif spec.variant == "ValleyFree":
        comms = (DOWN_TAG,)
        tagged = HasComm(DOWN_TAG)
        for e in up:
            transfer[e] = (Clause(tagged, (), False), Clause(TRUE, (), True))
        for e in down:
            transfer[e] = (Clause(TRUE, (Action("addComm", DOWN_TAG),), True),)
        hill = uphill(nodes, up, d)
        for v in nodes:
            n = dmap[v]
            if v in hill:
                I[v] = Implies(live, conj(LpCmp("=", DEFAULT_LP), LenCmp(">=", n),
                                          Implies(LenCmp("=", n), Not(tagged))))
                Q[v] = conj(live, LpCmp("=", DEFAULT_LP), LenCmp("=", n), Not(tagged))
                Y[v] = conj(live, Not(tagged))
            else:
                I[v] = Implies(live, conj(LpCmp("=", DEFAULT_LP), LenCmp(">=", n)))
                Q[v] = conj(live, LpCmp("=", DEFAULT_LP), LenCmp("=", n))
                Y[v] = live

    elif spec.variant == "Hijack":
        h = HIJACKER
        cores = [v for v in nodes if v.startswith("core")]
        nodes = nodes + [h]
        init[h] = hijack_route(hijack_seed)
        internal = PrefixEq(INTERNAL_PREFIX)
        for c in cores:
            transfer[(h, c)] = (Clause(internal, (), False), Clause(TRUE, (), True))
            transfer[(c, h)] = DENY_ALL
            links = links + [(h, c), (c, h)]
        clean = Not(Visited(h))
        for v in nodes:
            if v == h:
                I[v] = Q[v] = conj(live, internal)
                Y[v] = TRUE
            else:
                I[v] = disj(IsNoRoute(), clean)
                Q[v] = Y[v] = conj(live, clean)

    net = Network(tuple(nodes), tuple(links), init, transfer, comms)
    return net, Interfaces(I, Q, Y), dmap


# -- running example -------------------------------------------------------------

RUNNING_NODES = ("A", "B", "E", "C")
RUNNING_LINKS = (("A", "B"), ("A", "C"), ("B", "E"), ("C", "E"))


def gen_running_example(node_order=RUNNING_NODES):
    """The four-node example and its two interface packages.

    Returns ``(network, (package1, package2))``.  All transfers set local
    preference 100 except B->E, which sets 300.  *node_order* fixes the bit
    layout of visited sets and therefore the final merge tiebreak; the
    default puts C last so any path through C loses a full tie.
    """
    links = [(u, v) for u, v in RUNNING_LINKS] + [(v, u) for u, v in RUNNING_LINKS]
    transfer = {}
    for e in links:
        lp = 300 if e == ("B", "E") else 100
        transfer[e] = (Clause(TRUE, (Action("setLp", lp),), True),)
    init = {v: NO_ROUTE for v in node_order}
    init["A"] = Route(prefix=INTERNAL_PREFIX, lp=100, path_len=0)
    net = Network(tuple(node_order), tuple(links), init, transfer)

    live = NOT_NO_ROUTE
    no_c = Not(Visited("C"))
    pkg1 = Interfaces(
        {v: TRUE for v in node_order},
        {v: live for v in node_order},
        {v: (live if v == "E" else TRUE) for v in node_order},
    )
    q2 = {
        "A": conj(live, LpCmp("=", 100), LenCmp("=", 0), no_c),
        "B": conj(live, LpCmp("=", 100), LenCmp("=", 1), no_c),
        "C": conj(live, LpCmp("=", 100), LenCmp("=", 1)),
        "E": conj(live, LpCmp("=", 300), LenCmp("=", 2), no_c),
    }
    mid = disj(IsNoRoute(), conj(LpCmp("=", 100), LenCmp(">=", 1)))
    i2 = {
        "A": q2["A"],
        "B": mid,
        "C": mid,
        "E": disj(IsNoRoute(), conj(LpCmp("<=", 300), LenCmp(">=", 2))),
    }
    y2 = {v: (conj(live, no_c) if v == "E" else TRUE) for v in node_order}
    return net, (pkg1, Interfaces(i2, q2, y2))
