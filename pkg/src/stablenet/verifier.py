"""End-to-end verification: condition discharge, CB-graph synthesis, connectivity.

Verification runs in two waves.  The first discharges the essential
conditions (Init, Prop, Inv); any invalid or unknown one fails the run.  The
second checks every CBroot and CBedge condition to build the maximal
converges-before graph, and the network is correct iff every node is
reachable from a root in that graph.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .network import Interfaces, Network, edge_name, validate_network
from .route import route_to_json
from .smt import SolverConfig, Unknown, Valid, check_validity
from .vcgen import VC, VCGen, try_replay


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class CBGraph:
    roots: frozenset
    edges: frozenset
    connected: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "roots", frozenset(self.roots))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "connected", frozenset(self.connected))

    def to_json(self) -> dict:
        return {"roots": sorted(self.roots), "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, doc) -> "CBGraph":
        return cls(frozenset(doc.get("roots", ())), frozenset(tuple(e) for e in doc.get("edges", ())))


def reachable(roots, edges) -> set:
    succ: dict = {}
    for u, v in edges:
        succ.setdefault(u, []).append(v)
    seen = set(roots)
    todo = deque(roots)
    while todo:
        u = todo.popleft()
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def is_connected(g: CBGraph, net: Network) -> tuple[bool, frozenset]:
    """BFS from all roots at once; returns ``(ok, unreachable)``."""
    seen = reachable(g.roots, g.edges)
    missing = frozenset(v for v in net.nodes if v not in seen)
    return not missing, missing


# -- triage ----------------------------------------------------------------------

@dataclass(frozen=True)
class TriageCase:
    belief: str
    cause: str
    action: str


@dataclass(frozen=True)
class TriageReport:
    vc_kind: str
    locus: object
    summary: str
    routes: dict
    cases: tuple

    def render(self) -> str:
        loc = edge_name(self.locus) if isinstance(self.locus, tuple) else self.locus
        lines = [f"{self.vc_kind}({loc}) violated: {self.summary}"]
        for k, r in self.routes.items():
            lines.append(f"  {k} = {r!r}")
        for i, c in enumerate(self.cases, 1):
            lines.append(f"  case {i}: if {c.belief}: {c.cause}; {c.action}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "vcKind": self.vc_kind,
            "locus": edge_name(self.locus) if isinstance(self.locus, tuple) else self.locus,
            "summary": self.summary,
            "routes": {k: route_to_json(r) for k, r in self.routes.items()},
            "cases": [{"belief": c.belief, "cause": c.cause, "action": c.action} for c in self.cases],
        }


_SKIP = "skip this counterexample"


def _case_table(kind, locus, conjunct):
    if kind == "Init":
        v = locus
        return (
            TriageCase("s_v is implausible", f"init({v}) is wrong", "bug in configuration"),
            TriageCase("s_v is plausible", f"I({v}) is too strong", f"weaken I({v})"),
        )
    if kind == "Prop":
        v = locus
        return (
            TriageCase("s_v is implausible", f"Q({v}) is too weak", f"strengthen Q({v})"),
            TriageCase("s_v is plausible", f"property Y({v}) fails on a plausible route",
                       "accept the bug or weaken Y"),
        )
    if kind == "Inv":
        u, v = locus
        return (
            TriageCase("s_u or s_v is implausible", f"I({u}) or I({v}) is too weak",
                       f"strengthen I({u}) or I({v})"),
            TriageCase("s_u, s_v and s_v' are plausible", f"I({v}) is too strong", f"weaken I({v})"),
            TriageCase("s_v' is implausible", f"transfer f({u},{v}) is wrong", "repair the policy"),
        )
    if kind == "CBroot" and conjunct == 0:
        v = locus
        return (
            TriageCase(f"{v} should not be a CB-root", "not a root", _SKIP),
            TriageCase("s_v is implausible", f"init({v}) is wrong", "bug in configuration"),
            TriageCase("s_v is plausible", f"Q({v}) is too strong", f"weaken Q({v})"),
        )
    if kind == "CBroot":
        u, v = locus if isinstance(locus, tuple) else ("u", locus)
        return (
            TriageCase(f"{v} should not be a CB-root", "not a root", _SKIP),
            TriageCase("s_u or s_v is implausible", f"I({u}) or Q({v}) is too weak",
                       f"strengthen I({u}) or Q({v})"),
            TriageCase("s_u, s_v and s_v' are plausible", f"Q({v}) is too strong", f"weaken Q({v})"),
            TriageCase("s_v' is implausible", f"transfer f({u},{v}) is wrong", "repair the policy"),
        )
    if kind == "CBedge":
        u, v = locus
        return (
            TriageCase(f"({u},{v}) should not be a CB-edge", "not a CB-edge", _SKIP),
            TriageCase("s_u or s_v is implausible", f"Q({u}) or I({v}) is too weak",
                       f"strengthen Q({u}) or I({v})"),
            TriageCase("s_u, s_v and s_v' are plausible", f"Q({v}) is too strong", f"weaken Q({v})"),
            TriageCase("s_v' is implausible", f"transfer f({u},{v}) is wrong", "repair the policy"),
        )
    raise ValueError(f"unknown VC kind {kind!r}")


_SUMMARY = {
    "Init": "s_v = init(v) is not in I(v)",
    "Prop": "s_v is in Q(v) but not in Y(v)",
    "Inv": "s_u in I(u), s_v in I(v), but s_v' = s_v + f(s_u) is not in I(v)",
    "CBroot0": "s_v = init(v) is not in Q(v)",
    "CBroot": "s_u in I(u), s_v in Q(v), but s_v' = s_v + f(s_u) is not in Q(v)",
    "CBedge": "s_u in Q(u), s_v in I(v), but s_v' = s_v + f(s_u) is not in Q(v)",
}


@dataclass(frozen=True)
class Failure:
    vc: VC
    model: dict
    triage: TriageReport | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {
            "vc": self.vc.kind,
            "locus": edge_name(self.vc.locus) if isinstance(self.vc.locus, tuple) else self.vc.locus,
            "model": {k: route_to_json(r) for k, r in self.model.items()},
        }
        if self.reason:
            out["reason"] = self.reason
        if self.triage is not None:
            out["triage"] = self.triage.to_json()
        return out


def diagnose(failure: Failure, net: Network | None = None, ifs: Interfaces | None = None) -> TriageReport:
    """Build the triage table for a failed condition.

    With *net* and *ifs* the model is replayed concretely so that ``s_v'``
    and, for CBroot, the offending conjunct are filled in.
    """
    vc, model = failure.vc, failure.model
    routes = {}
    conjunct, locus = None, vc.locus
    rep = try_replay(vc, model, net, ifs) if net is not None and ifs is not None else None
    if vc.kind == "Init" and net is not None:
        routes["s_v"] = net.init[vc.locus]
    elif vc.kind == "CBroot":
        if rep is not None and rep.violated:
            conjunct = rep.conjunct
            if rep.edge is not None:
                locus = rep.edge
                var = next(n for n in vc.roles if vc.roles[n] == rep.edge[0] and n != "s_v")
                routes["s_u"] = model[var]
                routes["s_v"] = model["s_v"]
            elif net is not None:
                routes["s_v"] = net.init[vc.locus]
        else:
            routes.update(model)
    else:
        routes.update(model)
    if rep is not None and rep.after is not None and vc.kind in ("Inv", "CBedge", "CBroot") and conjunct != 0:
        routes["s_v'"] = rep.after
    key = "CBroot0" if vc.kind == "CBroot" and conjunct == 0 else vc.kind
    return TriageReport(vc.kind, locus, _SUMMARY[key], routes, _case_table(vc.kind, locus, conjunct))


# -- verdict -------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    status: str
    failures: tuple = ()
    unconnected: frozenset = frozenset()
    cb_graph: CBGraph | None = None
    evidence: dict = field(default_factory=dict)
    queries: dict = field(default_factory=dict)

    @property
    def correct(self) -> bool:
        return self.status == "Correct"

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "failures": [f.to_json() for f in self.failures],
            "unconnected": sorted(self.unconnected),
            "cbGraph": self.cb_graph.to_json() if self.cb_graph is not None else None,
            "queries": dict(self.queries),
        }
        out["unconnectedEvidence"] = {v: [f.to_json() for f in fs]
                                      for v, fs in sorted(self.evidence.items())}
        return out


def _discharge(vcs: list[VC], config: SolverConfig, jobs: int) -> list:
    if jobs <= 1 or len(vcs) <= 1:
        return [check_validity(vc.formula, config) for vc in vcs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda vc: check_validity(vc.formula, config), vcs))


def _failure(vc, res, net, ifs) -> Failure:
    if isinstance(res, Unknown):
        return Failure(vc, {}, None, res.reason)
    f = Failure(vc, res.model)
    return Failure(vc, res.model, diagnose(f, net, ifs))


def _count(vcs) -> dict:
    out: dict = {}
    for vc in vcs:
        out[vc.kind] = out.get(vc.kind, 0) + 1
    return out


def synthesize_cbgraph(net: Network, ifs: Interfaces, config: SolverConfig | None = None,
                       jobs: int = 1, profile: str = "full", _gen: VCGen | None = None):
    """Check every CBroot/CBedge condition; returns ``(graph, failures)``.

    Unknown results are treated as not valid, so the graph only contains
    loci the solver proved.
    """
    config = config or SolverConfig()
    gen = _gen or VCGen(net, ifs, profile=profile)
    vcs = gen.cb()
    results = _discharge(vcs, config, jobs)
    roots, edges, failed = set(), set(), []
    for vc, res in zip(vcs, results):
        if isinstance(res, Valid):
            (roots if vc.kind == "CBroot" else edges).add(vc.locus)
        else:
            failed.append(_failure(vc, res, net, ifs))
    g = CBGraph(frozenset(roots), frozenset(edges))
    g = CBGraph(g.roots, g.edges, frozenset(reachable(g.roots, g.edges)))
    return g, failed


def verify(net: Network, ifs: Interfaces, config: SolverConfig | None = None, jobs: int = 1,
           profile: str = "full") -> Verdict:
    errors = validate_network(net, ifs)
    if errors:
        raise ConfigError(errors)
    config = config or SolverConfig()
    gen = VCGen(net, ifs, profile=profile)

    essential = gen.essential()
    results = _discharge(essential, config, jobs)
    failures = [_failure(vc, res, net, ifs) for vc, res in zip(essential, results)
                if not isinstance(res, Valid)]
    if failures:
        return Verdict("Fail", tuple(failures), queries=_count(essential))

    g, cb_failures = synthesize_cbgraph(net, ifs, config, jobs, profile, gen)
    ok, missing = is_connected(g, net)
    evidence = {}
    for v in missing:
        evidence[v] = [f for f in cb_failures
                       if f.vc.locus == v or (isinstance(f.vc.locus, tuple) and f.vc.locus[1] == v)]
    queries = _count(essential)
    queries.update({"CBroot": len(net.nodes), "CBedge": len(net.edges)})
    return Verdict("Correct" if ok else "Fail", tuple(cb_failures), missing, g, evidence, queries)
