"""Verification conditions: Init, Inv, Prop, CBroot and CBedge.

Each condition is a validity query over free route variables.  The variable
naming is fixed: ``s_v`` is the receiving node's current route and ``s_u``
(or ``s_u0``, ``s_u1``, ... for CBroot) the sender's.  ``roles`` maps each
variable to the node it stands for.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .expr import RawEvaluationError, eval_predicate
from .network import Interfaces, Network, apply_transfer, edge_name
from .smt import Encoder, Formula, MacroScope
from .smt.encoder import smt_and

KINDS = ("Init", "Inv", "Prop", "CBroot", "CBedge")
ESSENTIAL = ("Init", "Inv", "Prop")


@dataclass(frozen=True)
class VC:
    kind: str
    locus: object
    formula: Formula
    roles: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        loc = edge_name(self.locus) if isinstance(self.locus, tuple) else self.locus
        return f"{self.kind}({loc})"


class VCGen:
    """Builds conditions for one network and interface package."""

    def __init__(self, net: Network, ifs: Interfaces, encoder: Encoder | None = None,
                 profile: str = "full"):
        self.net = net
        self.ifs = ifs
        self.enc = encoder or Encoder(net, profile, ifs)

    def _formula(self, kind, locus, variables, body, scope=None):
        defs = tuple(scope.definitions) if scope else ()
        label = f"{kind}_{edge_name(locus) if isinstance(locus, tuple) else locus}"
        return Formula(self.enc, tuple(variables), body, defs, label)

    def _step(self, scope, e, su, sv):
        """Bind ``s_v (+) f_e(s_u)`` and return its term."""
        t = scope.bind(self.enc.transfer(e, su), "f")
        return scope.bind(self.enc.merge(sv, t), "m")

    def vc_init(self, v) -> VC:
        body = self.enc.predicate(self.ifs.I[v], self.enc.literal(self.net.init[v]))
        return VC("Init", v, self._formula("Init", v, (), body))

    def vc_prop(self, v) -> VC:
        enc, s = self.enc, self.enc.var("s_v")
        body = f"(=> {enc.predicate(self.ifs.Q[v], s)} {enc.predicate(self.ifs.Y[v], s)})"
        return VC("Prop", v, self._formula("Prop", v, ("s_v",), body), {"s_v": v})

    def _edge_vc(self, kind, e, pre_u, pre_v, post_v) -> VC:
        u, v = e
        enc = self.enc
        su, sv = enc.var("s_u"), enc.var("s_v")
        scope = MacroScope(enc)
        m = self._step(scope, e, su, sv)
        hyp = smt_and(enc.predicate(pre_u, su), enc.predicate(pre_v, sv))
        body = f"(=> {hyp} {enc.predicate(post_v, m)})"
        return VC(kind, tuple(e), self._formula(kind, tuple(e), ("s_u", "s_v"), body, scope),
                  {"s_u": u, "s_v": v})

    def vc_inv(self, e) -> VC:
        u, v = e
        return self._edge_vc("Inv", e, self.ifs.I[u], self.ifs.I[v], self.ifs.I[v])

    def vc_cbedge(self, e) -> VC:
        u, v = e
        return self._edge_vc("CBedge", e, self.ifs.Q[u], self.ifs.I[v], self.ifs.Q[v])

    def vc_cbroot(self, v) -> VC:
        enc = self.enc
        qv = self.ifs.Q[v]
        sv = enc.var("s_v")
        scope = MacroScope(enc)
        parts = [enc.predicate(qv, enc.literal(self.net.init[v]))]
        variables = ["s_v"]
        roles = {"s_v": v}
        for i, u in enumerate(self.net.in_neighbors(v)):
            name = f"s_u{i}"
            variables.append(name)
            roles[name] = u
            su = enc.var(name)
            m = self._step(scope, (u, v), su, sv)
            hyp = smt_and(enc.predicate(self.ifs.I[u], su), enc.predicate(qv, sv))
            parts.append(f"(=> {hyp} {enc.predicate(qv, m)})")
        return VC("CBroot", v, self._formula("CBroot", v, variables, smt_and(*parts), scope), roles)

    def essential(self) -> list[VC]:
        out = []
        for v in self.net.nodes:
            out.append(self.vc_init(v))
            out.append(self.vc_prop(v))
        out += [self.vc_inv(e) for e in self.net.edges]
        return out

    def cb(self) -> list[VC]:
        return [self.vc_cbroot(v) for v in self.net.nodes] + [self.vc_cbedge(e) for e in self.net.edges]


# -- concrete replay -----------------------------------------------------------

@dataclass(frozen=True)
class Replay:
    """Concrete re-evaluation of a VC body under a model.

    ``violated`` is True when the model really falsifies the condition.
    For CBroot, ``conjunct`` is 0 for the init conjunct and ``edge`` names
    the offending incoming edge otherwise.  ``after`` is ``s_v'``.
    """

    violated: bool
    conjunct: int | None = None
    edge: tuple | None = None
    after: object = None


def replay(vc: VC, model: dict, net: Network, ifs: Interfaces) -> Replay:
    """Re-evaluate *vc* on concrete routes; raises on raw solver predicates."""
    ev = eval_predicate
    if vc.kind == "Init":
        s = net.init[vc.locus]
        return Replay(not ev(ifs.I[vc.locus], s), after=s)
    if vc.kind == "Prop":
        v = vc.locus
        s = model["s_v"]
        return Replay(ev(ifs.Q[v], s) and not ev(ifs.Y[v], s), after=s)
    if vc.kind in ("Inv", "CBedge"):
        u, v = vc.locus
        su, sv = model["s_u"], model["s_v"]
        after = net.merge(sv, apply_transfer(vc.locus, su, net))
        if vc.kind == "Inv":
            hyp, post = ev(ifs.I[u], su) and ev(ifs.I[v], sv), ev(ifs.I[v], after)
        else:
            hyp, post = ev(ifs.Q[u], su) and ev(ifs.I[v], sv), ev(ifs.Q[v], after)
        return Replay(hyp and not post, edge=vc.locus, after=after)
    if vc.kind == "CBroot":
        v = vc.locus
        if not ev(ifs.Q[v], net.init[v]):
            return Replay(True, conjunct=0, after=net.init[v])
        sv = model.get("s_v")
        for i, var in enumerate(n for n in vc.roles if n != "s_v"):
            u = vc.roles[var]
            su = model[var]
            after = net.merge(sv, apply_transfer((u, v), su, net))
            if ev(ifs.I[u], su) and ev(ifs.Q[v], sv) and not ev(ifs.Q[v], after):
                return Replay(True, conjunct=i + 1, edge=(u, v), after=after)
        return Replay(False)
    raise ValueError(f"unknown VC kind {vc.kind!r}")


def try_replay(vc, model, net, ifs) -> Replay | None:
    try:
        return replay(vc, model, net, ifs)
    except RawEvaluationError:
        return None
