"""SMT-LIB v2 encoding of routes, merge, transfer policies and predicates.

A route is encoded as the datatype ``Route`` with a ``noroute`` constructor and
a ``mk-route`` record.  Internally every route-valued term is handled as a
:class:`RouteTerm` of six field expressions (none flag, prefix, lp, length,
visited mask, community mask) whose fields are canonical zeros when the none
flag is set.  The same field view is used by the CHC encoding, where routes
are passed to uninterpreted predicates field by field.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..expr import (
    And,
    FalseP,
    HasComm,
    Implies,
    IsNoRoute,
    LenCmp,
    LpCmp,
    Not,
    Or,
    Predicate,
    PrefixEq,
    Raw,
    TrueP,
    Visited,
    predicate_literals,
    transfer_literals,
)
from ..route import NO_ROUTE, PREFIX_BITS, AnyRoute, Route
from .sexpr import atom_value, to_text

PROFILES = ("full", "simple")
FIELDS = ("none", "prefix", "lp", "len", "visited", "comms")

_SMT_OP = {"=": "=", "!=": "distinct", "<": "<", "<=": "<=", ">": ">", ">=": ">="}


class UniverseOverflow(ValueError):
    pass


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class RouteTerm:
    none: str
    prefix: str
    lp: str
    len: str
    visited: str
    comms: str

    def fields(self) -> tuple:
        return (self.none, self.prefix, self.lp, self.len, self.visited, self.comms)

    @classmethod
    def of(cls, fields) -> "RouteTerm":
        return cls(*fields)


def int_lit(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def bv_lit(value: int, width: int) -> str:
    if width % 4 == 0:
        return "#x" + format(value, f"0{width // 4}x")
    return "#b" + format(value, f"0{width}b")


def ite(c: str, a: str, b: str) -> str:
    if a == b:
        return a
    return f"(ite {c} {a} {b})"


def smt_and(*args: str) -> str:
    args = tuple(a for a in args if a != "true")
    if "false" in args:
        return "false"
    if not args:
        return "true"
    return args[0] if len(args) == 1 else "(and " + " ".join(args) + ")"


def smt_or(*args: str) -> str:
    args = tuple(a for a in args if a != "false")
    if "true" in args:
        return "true"
    if not args:
        return "false"
    return args[0] if len(args) == 1 else "(or " + " ".join(args) + ")"


def smt_not(a: str) -> str:
    if a == "true":
        return "false"
    if a == "false":
        return "true"
    return f"(not {a})"


def network_prefixes(net, ifs=None) -> set:
    found = set()
    for r in net.init.values():
        if r is not NO_ROUTE:
            found.add(r.prefix)
    for t in net.transfer.values():
        found |= {v for k, v in transfer_literals(t) if k == "prefix"}
    if ifs is not None:
        for table in (ifs.I, ifs.Q, ifs.Y):
            for p in table.values():
                found |= {v for k, v in predicate_literals(p) if k == "prefix"}
    return found


class Encoder:
    """Encodes one network's routes under a configuration *profile*.

    ``full`` keeps the 32-bit prefix.  ``simple`` encodes the prefix as its
    rank among the prefix literals the network mentions, which shrinks it to
    one or two bits on the benchmark networks while preserving both equality
    and the tiebreak order.
    """

    MAX_MASK_BITS = 64

    def __init__(self, net, profile: str = "full", ifs=None):
        if profile not in PROFILES:
            raise EncodingError(f"unknown profile {profile!r}")
        self.net = net
        self.profile = profile
        self.nodes = tuple(net.nodes)
        self.tags = tuple(net.communities)
        if len(self.nodes) > self.MAX_MASK_BITS or len(self.tags) > self.MAX_MASK_BITS:
            raise UniverseOverflow(
                f"{len(self.nodes)} nodes / {len(self.tags)} tags exceed "
                f"{self.MAX_MASK_BITS}-bit masks; raise Encoder.MAX_MASK_BITS")
        self.node_index = {v: i for i, v in enumerate(self.nodes)}
        self.tag_index = {t: i for i, t in enumerate(self.tags)}
        self.visited_width = max(1, len(self.nodes))
        self.comms_width = max(1, len(self.tags))
        if profile == "full":
            self.prefix_universe = None
            self.prefix_width = PREFIX_BITS
        else:
            universe = sorted(network_prefixes(net, ifs) or {0})
            self.prefix_universe = tuple(universe)
            self.prefix_rank = {p: i for i, p in enumerate(universe)}
            self.prefix_width = max(1, (len(universe) - 1).bit_length())
        self.sorts = ("Bool", self._bv(self.prefix_width), "Int", "Int",
                      self._bv(self.visited_width), self._bv(self.comms_width))
        self.none_term = RouteTerm("true", bv_lit(0, self.prefix_width), "0", "0",
                                   bv_lit(0, self.visited_width), bv_lit(0, self.comms_width))

    @staticmethod
    def _bv(w):
        return f"(_ BitVec {w})"

    # -- sorts, variables and literals --------------------------------------

    def sort_declarations(self) -> str:
        return ("(declare-datatypes ((Route 0)) (((noroute) (mk-route"
                f" (r-prefix {self.sorts[1]}) (r-lp Int) (r-len Int)"
                f" (r-visited {self.sorts[4]}) (r-comms {self.sorts[5]})))))")

    def var(self, name: str) -> RouteTerm:
        """Canonical field view of a ``Route``-sorted constant."""
        isnone = f"((_ is noroute) {name})"
        z = self.none_term
        return RouteTerm(
            isnone,
            f"(ite {isnone} {z.prefix} (r-prefix {name}))",
            f"(ite {isnone} 0 (r-lp {name}))",
            f"(ite {isnone} 0 (r-len {name}))",
            f"(ite {isnone} {z.visited} (r-visited {name}))",
            f"(ite {isnone} {z.comms} (r-comms {name}))",
        )

    def domain_axiom(self, name: str) -> str:
        extra = self._field_bounds(f"(r-prefix {name})", f"(r-comms {name})")
        return (f"(=> ((_ is mk-route) {name}) "
                + smt_and(f"(>= (r-lp {name}) 0)", f"(>= (r-len {name}) 0)", *extra) + ")")

    def _field_bounds(self, prefix: str, comms: str) -> list:
        out = []
        if self.prefix_universe is not None and len(self.prefix_universe) < 1 << self.prefix_width:
            out.append(f"(bvult {prefix} {bv_lit(len(self.prefix_universe), self.prefix_width)})")
        if not self.tags:
            out.append(f"(= {comms} {bv_lit(0, 1)})")
        return out

    def field_domain(self, t: RouteTerm) -> str:
        """Well-formedness of a route given as six free field variables."""
        z = self.none_term
        zeros = smt_and(*(f"(= {a} {b})" for a, b in zip(t.fields()[1:], z.fields()[1:])))
        live = smt_and(f"(>= {t.lp} 0)", f"(>= {t.len} 0)", *self._field_bounds(t.prefix, t.comms))
        return f"(ite {t.none} {zeros} {live})"

    def prefix_code(self, p: int) -> int:
        if self.prefix_universe is None:
            return p
        try:
            return self.prefix_rank[p]
        except KeyError:
            raise EncodingError(
                f"prefix 0x{p:08x} is outside the simple-profile universe") from None

    def prefix_value(self, code: int) -> int:
        if self.prefix_universe is None:
            return code
        if code >= len(self.prefix_universe):
            raise EncodingError(f"prefix rank {code} out of range")
        return self.prefix_universe[code]

    def visited_mask(self, nodes) -> int:
        return sum(1 << self.node_index[v] for v in nodes)

    def comms_mask(self, tags) -> int:
        return sum(1 << self.tag_index[t] for t in tags)

    def literal(self, r: AnyRoute) -> RouteTerm:
        if r is NO_ROUTE:
            return self.none_term
        return RouteTerm(
            "false",
            bv_lit(self.prefix_code(r.prefix), self.prefix_width),
            int_lit(r.lp),
            int_lit(r.path_len),
            bv_lit(self.visited_mask(r.visited), self.visited_width),
            bv_lit(self.comms_mask(r.comms), self.comms_width),
        )

    def datatype_literal(self, r: AnyRoute) -> str:
        if r is NO_ROUTE:
            return "noroute"
        t = self.literal(r)
        return f"(mk-route {t.prefix} {t.lp} {t.len} {t.visited} {t.comms})"

    # -- decoding -----------------------------------------------------------

    def decode_fields(self, values) -> AnyRoute:
        none, prefix, lp, length, visited, comms = values
        if none:
            return NO_ROUTE
        return Route(
            prefix=self.prefix_value(prefix),
            lp=lp,
            path_len=length,
            visited=frozenset(v for v, i in self.node_index.items() if visited >> i & 1),
            comms=frozenset(t for t, i in self.tag_index.items() if comms >> i & 1),
        )

    def decode_value(self, sexpr) -> AnyRoute:
        """Decode a ``Route`` datatype value printed by the solver."""
        if sexpr == "noroute":
            return NO_ROUTE
        if isinstance(sexpr, list) and sexpr and sexpr[0] == "mk-route" and len(sexpr) == 6:
            vals = [atom_value(x) for x in sexpr[1:]]
            return self.decode_fields([False, *vals])
        raise EncodingError(f"cannot decode route value {to_text(sexpr)}")

    # -- predicates ----------------------------------------------------------

    def predicate(self, p: Predicate, t: RouteTerm) -> str:
        live = smt_not(t.none)
        match p:
            case TrueP():
                return "true"
            case FalseP():
                return "false"
            case IsNoRoute():
                return t.none
            case And(args):
                return smt_and(*(self.predicate(a, t) for a in args))
            case Or(args):
                return smt_or(*(self.predicate(a, t) for a in args))
            case Not(a):
                return smt_not(self.predicate(a, t))
            case Implies(a, b):
                return smt_or(smt_not(self.predicate(a, t)), self.predicate(b, t))
            case LpCmp(op, v):
                return smt_and(live, f"({_SMT_OP[op]} {t.lp} {int_lit(v)})")
            case LenCmp(op, v):
                return smt_and(live, f"({_SMT_OP[op]} {t.len} {int_lit(v)})")
            case PrefixEq(pfx):
                if self.prefix_universe is not None and pfx not in self.prefix_rank:
                    return "false"
                code = bv_lit(self.prefix_code(pfx), self.prefix_width)
                return smt_and(live, f"(= {t.prefix} {code})")
            case HasComm(tag):
                i = self.tag_index[tag]
                return smt_and(live, f"(= ((_ extract {i} {i}) {t.comms}) #b1)")
            case Visited(node):
                i = self.node_index[node]
                return smt_and(live, f"(= ((_ extract {i} {i}) {t.visited}) #b1)")
            case Raw(params, body):
                if len(params) != len(FIELDS):
                    raise EncodingError("raw predicate needs one parameter per route field")
                binds = " ".join(f"({x} {f})" for x, f in zip(params, t.fields()))
                return f"(let ({binds}) {body})"
        raise EncodingError(f"cannot encode predicate {p!r}")

    # -- merge ----------------------------------------------------------------

    def preferred(self, a: RouteTerm, b: RouteTerm) -> str:
        """``a`` is at least as preferred as ``b`` (both assumed live)."""
        cmp = f"(bvule {a.comms} {b.comms})"
        cmp = smt_or(f"(bvult {a.prefix} {b.prefix})", smt_and(f"(= {a.prefix} {b.prefix})", cmp))
        cmp = smt_or(f"(bvult {a.visited} {b.visited})", smt_and(f"(= {a.visited} {b.visited})", cmp))
        cmp = smt_or(f"(< {a.len} {b.len})", smt_and(f"(= {a.len} {b.len})", cmp))
        return smt_or(f"(> {a.lp} {b.lp})", smt_and(f"(= {a.lp} {b.lp})", cmp))

    def merge(self, a: RouteTerm, b: RouteTerm) -> RouteTerm:
        pick_a = smt_and(smt_not(a.none), smt_or(b.none, self.preferred(a, b)))
        fields = [smt_and(a.none, b.none)]
        fields += [ite(pick_a, x, y) for x, y in zip(a.fields()[1:], b.fields()[1:])]
        return RouteTerm.of(fields)

    # -- transfer -------------------------------------------------------------

    def _apply_actions(self, s: RouteTerm, actions) -> RouteTerm:
        prefix, lp, comms = s.prefix, s.lp, s.comms
        for a in actions:
            match a.kind:
                case "setLp":
                    lp = int_lit(a.value)
                case "setPrefix":
                    prefix = bv_lit(self.prefix_code(a.value), self.prefix_width)
                case "addComm":
                    comms = f"(bvor {comms} {bv_lit(1 << self.tag_index[a.value], self.comms_width)})"
                case "removeComm":
                    keep = ((1 << self.comms_width) - 1) ^ (1 << self.tag_index[a.value])
                    comms = f"(bvand {comms} {bv_lit(keep, self.comms_width)})"
        return RouteTerm(s.none, prefix, lp, s.len, s.visited, comms)

    def transfer(self, e, s: RouteTerm) -> RouteTerm:
        u = e[0]
        policy = self.net.transfer[tuple(e)]
        sender_bit = bv_lit(1 << self.node_index[u], self.visited_width)
        result = self.none_term
        for clause in reversed(policy):
            guard = self.predicate(clause.guard, s)
            if clause.permit:
                a = self._apply_actions(s, clause.actions)
                out = RouteTerm("false", a.prefix, a.lp, f"(+ {s.len} 1)",
                                f"(bvor {s.visited} {sender_bit})", a.comms)
            else:
                out = self.none_term
            result = RouteTerm.of(ite(guard, x, y) for x, y in zip(out.fields(), result.fields()))
        return RouteTerm.of(ite(s.none, z, r) for z, r in zip(self.none_term.fields(), result.fields()))


class MacroScope:
    """Names intermediate route terms with zero-argument ``define-fun``s."""

    def __init__(self, encoder: Encoder, stem: str = "t"):
        self.encoder = encoder
        self.stem = stem
        self.definitions: list[tuple[str, str, str]] = []
        self._n = 0

    def bind(self, t: RouteTerm, hint: str | None = None) -> RouteTerm:
        name = f"{hint or self.stem}{self._n}"
        self._n += 1
        names = []
        for f, sort, expr in zip(FIELDS, self.encoder.sorts, t.fields()):
            n = f"{name}.{f}"
            self.definitions.append((n, sort, expr))
            names.append(n)
        return RouteTerm.of(names)
