"""How many CB-edge removals each node survives, via unit-capacity max-flow.

The number of edge-disjoint CB-paths from the root set to ``v`` equals the
minimum number of CB-edges whose removal disconnects ``v`` (Menger), so a
node tolerates ``flow - 1`` arbitrary removals.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

UNBOUNDED = float("inf")
_SOURCE = object()


class Dinic:
    """Dinic's blocking-flow max-flow on an integer-capacity digraph."""

    def __init__(self):
        self.index: dict = {}
        self.head: list[list[int]] = []
        self.to: list[int] = []
        self.cap: list[int] = []

    def node(self, x) -> int:
        i = self.index.get(x)
        if i is None:
            i = self.index[x] = len(self.head)
            self.head.append([])
        return i

    def add_edge(self, u, v, cap: int = 1) -> None:
        a, b = self.node(u), self.node(v)
        self.head[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(cap)
        self.head[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)

    def _levels(self, s, t):
        level = [-1] * len(self.head)
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for eid in self.head[u]:
                w = self.to[eid]
                if self.cap[eid] > 0 and level[w] < 0:
                    level[w] = level[u] + 1
                    q.append(w)
        return level if level[t] >= 0 else None

    def max_flow(self, s, t, limit: int | None = None) -> int:
        if s not in self.index or t not in self.index:
            return 0
        s, t = self.index[s], self.index[t]
        if s == t:
            raise ValueError("source and sink coincide")
        cap = self.cap
        flow = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            it = [0] * len(self.head)
            while True:
                # iterative DFS for one augmenting path in the level graph
                path: list[int] = []
                u = s
                found = False
                while True:
                    if u == t:
                        found = True
                        break
                    adv = False
                    edges = self.head[u]
                    while it[u] < len(edges):
                        eid = edges[it[u]]
                        w = self.to[eid]
                        if cap[eid] > 0 and level[w] == level[u] + 1:
                            path.append(eid)
                            u = w
                            adv = True
                            break
                        it[u] += 1
                    if not adv:
                        if not path:
                            break
                        level[u] = -1  # dead end
                        eid = path.pop()
                        u = self.to[eid ^ 1]
                        it[u] += 1
                if not found:
                    break
                push = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= push
                    cap[e ^ 1] += push
                flow += push
                if limit is not None and flow >= limit:
                    return flow


def max_tolerance(g, v):
    """Largest k such that *v* stays root-reachable after any k CB-edge removals.

    Roots are :data:`UNBOUNDED`; an unreachable node gives -1.
    """
    if v in g.roots:
        return UNBOUNDED
    d = Dinic()
    d.node(_SOURCE)
    for r in sorted(g.roots, key=str):
        d.add_edge(_SOURCE, r, len(g.edges) + 1)
    for u, w in sorted(g.edges, key=str):
        d.add_edge(u, w, 1)
    return d.max_flow(_SOURCE, v) - 1


@dataclass(frozen=True)
class ToleranceReport:
    per_node: dict
    network: float
    for_k: bool | None = None

    def to_json(self) -> dict:
        def enc(x):
            return "unbounded" if x == UNBOUNDED else int(x)
        out = {"perNode": {v: enc(k) for v, k in self.per_node.items()},
               "network": enc(self.network)}
        if self.for_k is not None:
            out["forK"] = self.for_k
        return out


def tolerance_report(g, net, k: int | None = None, jobs: int = 1) -> ToleranceReport:
    nodes = list(net.nodes)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            vals = list(pool.map(lambda v: max_tolerance(g, v), nodes))
    else:
        vals = [max_tolerance(g, v) for v in nodes]
    per = dict(zip(nodes, vals))
    network = min(vals) if vals else UNBOUNDED
    return ToleranceReport(per, network, None if k is None else network >= k)
