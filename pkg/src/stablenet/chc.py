"""Interface synthesis from a given CB-graph with constrained Horn clauses.

Unknown predicates ``I<i>`` and ``Q<i>`` (one pair per node, ``i`` the node's
position) take a route as six field arguments.  The rule set mirrors the
verification conditions with the interfaces left open; a HORN solver either
finds interpretations, which are then re-checked through the ordinary
verifier path, or proves that none exist.
"""
from __future__ import annotations

from dataclasses import dataclass

from .expr import FALSE, Raw
from .network import Interfaces, Network, edge_name
from .smt import Encoder, SolverConfig, SolverCrash, Valid, check_validity
from .smt.encoder import FIELDS, RouteTerm, smt_and
from .smt.sexpr import SexprError, parse_all, to_text
from .smt.solver import run_script
from .verifier import CBGraph, Verdict, is_connected, reachable
from .vcgen import VCGen


class DisconnectedCBGraph(ValueError):
    def __init__(self, unreachable):
        self.unreachable = frozenset(unreachable)
        super().__init__(f"CB-graph does not reach {sorted(self.unreachable)}")


class RoundTripFailure(AssertionError):
    def __init__(self, vc, result):
        self.vc = vc
        self.result = result
        super().__init__(f"solved interfaces fail {vc.name}: {result}")


@dataclass(frozen=True)
class ChcRule:
    kind: str
    locus: object
    text: str


@dataclass(frozen=True)
class ChcSystem:
    encoder: Encoder
    Y: dict
    graph: CBGraph
    rules: tuple

    def counts(self) -> dict:
        out: dict = {}
        for r in self.rules:
            out[r.kind] = out.get(r.kind, 0) + 1
        return out

    def pred_names(self, v) -> tuple[str, str]:
        i = self.encoder.node_index[v]
        return f"I{i}", f"Q{i}"

    def script(self) -> str:
        sig = " ".join(self.encoder.sorts)
        # without predicate inlining the solver reports quantifier-free
        # interpretations, which the verifier can check directly
        lines = ["(set-option :fp.xform.inline_linear false)",
                 "(set-option :fp.xform.inline_eager false)",
                 "(set-logic HORN)"]
        for v in self.encoder.nodes:
            for name in self.pred_names(v):
                lines.append(f"(declare-fun {name} ({sig}) Bool)")
        for r in self.rules:
            loc = edge_name(r.locus) if isinstance(r.locus, tuple) else r.locus
            lines.append(f"; {r.kind} {loc}")
            lines.append(r.text)
        lines += ["(check-sat)", "(get-model)"]
        return "\n".join(lines) + "\n"


class _Rule:
    """Collects bound variables and body constraints for one Horn clause."""

    def __init__(self, enc: Encoder):
        self.enc = enc
        self.vars: list[tuple[str, str]] = []
        self.body: list[str] = []

    def route(self, stem: str) -> RouteTerm:
        names = []
        for f, sort in zip(FIELDS, self.enc.sorts):
            n = f"{stem}_{f}"
            self.vars.append((n, sort))
            names.append(n)
        t = RouteTerm.of(names)
        self.body.append(self.enc.field_domain(t))
        return t

    def bind(self, t: RouteTerm, stem: str) -> RouteTerm:
        names = []
        for f, sort, expr in zip(FIELDS, self.enc.sorts, t.fields()):
            n = f"{stem}_{f}"
            self.vars.append((n, sort))
            self.body.append(f"(= {n} {expr})")
            names.append(n)
        return RouteTerm.of(names)

    def render(self, head: str) -> str:
        decl = " ".join(f"({n} {s})" for n, s in self.vars)
        return f"(assert (forall ({decl}) (=> {smt_and(*self.body)} {head})))"


def _app(name, t: RouteTerm) -> str:
    return f"({name} {' '.join(t.fields())})"


def emit_chc(net: Network, Y, g: CBGraph, profile: str = "simple",
             encoder: Encoder | None = None) -> ChcSystem:
    ok, missing = is_connected(g, net)
    if not ok:
        raise DisconnectedCBGraph(missing)
    enc = encoder or Encoder(net, profile, Interfaces({}, {}, dict(Y)))
    sysnames = {v: (f"I{enc.node_index[v]}", f"Q{enc.node_index[v]}") for v in net.nodes}
    rules = []

    def step(kind, locus, pre_u, pre_v, head):
        u, v = locus
        r = _Rule(enc)
        su, sv = r.route("su"), r.route("sv")
        r.body += [_app(pre_u, su), _app(pre_v, sv)]
        t = r.bind(enc.transfer(locus, su), "ft")
        m = r.bind(enc.merge(sv, t), "mg")
        rules.append(ChcRule(kind, locus, r.render(_app(head, m))))

    for v in net.nodes:
        Iv, _ = sysnames[v]
        rules.append(ChcRule("Init", v, f"(assert {_app(Iv, enc.literal(net.init[v]))})"))
    for v in net.nodes:
        _, Qv = sysnames[v]
        r = _Rule(enc)
        s = r.route("sv")
        r.body += [_app(Qv, s), f"(not {enc.predicate(Y[v], s)})"]
        rules.append(ChcRule("Prop", v, r.render("false")))
    for e in net.edges:
        u, v = e
        step("Inv", e, sysnames[u][0], sysnames[v][0], sysnames[v][0])
    for v in sorted(g.roots, key=net.nodes.index):
        _, Qv = sysnames[v]
        rules.append(ChcRule("CBroot", v, f"(assert {_app(Qv, enc.literal(net.init[v]))})"))
        for u in net.in_neighbors(v):
            step("CBroot", (u, v), sysnames[u][0], Qv, Qv)
    for e in sorted(g.edges, key=net.edges.index):
        u, v = e
        step("CBedge", e, sysnames[u][1], sysnames[v][0], sysnames[v][1])
    return ChcSystem(enc, dict(Y), g, tuple(rules))


@dataclass(frozen=True)
class ChcSolution:
    encoder: Encoder
    interp: dict  # node -> (I, Q)
    raw: str = ""

    def interfaces(self, Y) -> Interfaces:
        return Interfaces({v: iq[0] for v, iq in self.interp.items()},
                          {v: iq[1] for v, iq in self.interp.items()}, dict(Y))

    def to_json(self) -> dict:
        from .expr import predicate_to_json
        return {
            "I": {v: predicate_to_json(iq[0]) for v, iq in self.interp.items()},
            "Q": {v: predicate_to_json(iq[1]) for v, iq in self.interp.items()},
        }


@dataclass(frozen=True)
class Infeasible:
    raw: str = ""


@dataclass(frozen=True)
class ChcUnknown:
    reason: str = "unknown"


def _parse_model(sys: ChcSystem, text: str) -> dict:
    try:
        exprs = parse_all(text)
    except SexprError as exc:
        raise SolverCrash(f"malformed HORN model: {exc}") from exc
    if not exprs or not isinstance(exprs[0], list):
        raise SolverCrash("HORN solver returned sat without a model")
    body = exprs[0][1:] if exprs[0] and exprs[0][0] == "model" else exprs[0]
    defs = {}
    for item in body:
        if isinstance(item, list) and len(item) == 5 and item[0] == "define-fun":
            params = tuple(p[0] for p in item[2])
            defs[item[1]] = Raw(params, to_text(item[4]))
    return defs


def solve_chc(sys: ChcSystem, config: SolverConfig | None = None):
    """Returns a :class:`ChcSolution`, :class:`Infeasible` or :class:`ChcUnknown`."""
    config = config or SolverConfig()
    out, err = run_script(sys.script(), config, "chc")
    if out is None:
        return ChcUnknown(err)
    status, _, rest = out.lstrip().partition("\n")
    status = status.strip()
    if status == "unsat":
        return Infeasible(out)
    if status == "unknown":
        return ChcUnknown("solver returned unknown")
    if status != "sat":
        raise SolverCrash(f"unexpected HORN solver output: {(out + err).strip()[:300]}")
    defs = _parse_model(sys, rest)
    interp = {}
    for v in sys.encoder.nodes:
        i_name, q_name = sys.pred_names(v)
        interp[v] = (defs.get(i_name, FALSE), defs.get(q_name, FALSE))
    return ChcSolution(sys.encoder, interp, out)


def validate_solution(sol: ChcSolution, net: Network, Y, g: CBGraph,
                      config: SolverConfig | None = None) -> Verdict:
    """Re-check solved interfaces through the SMT verification path.

    Runs the essential conditions plus CBroot for every declared root and
    CBedge for every declared edge.  Any failure raises
    :class:`RoundTripFailure`.
    """
    config = config or SolverConfig()
    ifs = sol.interfaces(Y)
    gen = VCGen(net, ifs, encoder=sol.encoder)
    vcs = gen.essential()
    vcs += [gen.vc_cbroot(v) for v in sorted(g.roots, key=net.nodes.index)]
    vcs += [gen.vc_cbedge(e) for e in sorted(g.edges, key=net.edges.index)]
    for vc in vcs:
        res = check_validity(vc.formula, config)
        if not isinstance(res, Valid):
            raise RoundTripFailure(vc, res)
    graph = CBGraph(g.roots, g.edges, frozenset(reachable(g.roots, g.edges)))
    return Verdict("Correct", cb_graph=graph)


def bfs_cbgraph(net: Network, roots) -> CBGraph:
    """Roots plus every edge that goes one BFS layer further from them."""
    level = {r: 0 for r in roots}
    frontier = list(roots)
    while frontier:
        nxt = []
        for u in frontier:
            for v in net.out_neighbors(u):
                if v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    edges = {(u, v) for u, v in net.edges
             if u in level and v in level and level[v] == level[u] + 1}
    return CBGraph(frozenset(roots), frozenset(edges))
