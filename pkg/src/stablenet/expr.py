"""Predicate and transfer-policy expressions over a single route.

Predicates are written as nested JSON-style lists, e.g.::

    ["and", ["not", ["isNoRoute"]], ["lp", "=", 300], ["not", ["visited", "C"]]]

and parsed into small frozen dataclass ASTs.  Every atom except ``isNoRoute``
is false on the no-route value, so predicates are total.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Mapping, Union

from .route import NO_ROUTE, AnyRoute, Route, format_prefix, parse_prefix, parse_tag

COMPARATORS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


class ExprError(ValueError):
    pass


@dataclass(frozen=True)
class TrueP:
    pass


@dataclass(frozen=True)
class FalseP:
    pass


@dataclass(frozen=True)
class IsNoRoute:
    pass


@dataclass(frozen=True)
class LpCmp:
    op: str
    value: int


@dataclass(frozen=True)
class LenCmp:
    op: str
    value: int


@dataclass(frozen=True)
class PrefixEq:
    prefix: int


@dataclass(frozen=True)
class HasComm:
    tag: str


@dataclass(frozen=True)
class Visited:
    node: str


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Implies:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Raw:
    """A solver-produced term over the flattened route fields.

    ``params`` name the six route fields in encoder order (none flag, prefix,
    lp, length, visited mask, community mask); ``body`` is SMT-LIB text.
    Raw predicates can only be evaluated through the solver.
    """

    params: tuple
    body: str


Predicate = Union[TrueP, FalseP, IsNoRoute, LpCmp, LenCmp, PrefixEq, HasComm,
                  Visited, And, Or, Not, Implies, Raw]

TRUE = TrueP()
FALSE = FalseP()
NOT_NO_ROUTE = Not(IsNoRoute())


def conj(*args) -> Predicate:
    args = tuple(a for a in args if a != TRUE)
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(args)


def disj(*args) -> Predicate:
    args = tuple(a for a in args if a != FALSE)
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(args)


class RawEvaluationError(ExprError):
    """Raised when a solver term is evaluated without a solver."""


def eval_predicate(p: Predicate, r: AnyRoute) -> bool:
    match p:
        case TrueP():
            return True
        case FalseP():
            return False
        case IsNoRoute():
            return r is NO_ROUTE
        case And(args):
            return all(eval_predicate(a, r) for a in args)
        case Or(args):
            return any(eval_predicate(a, r) for a in args)
        case Not(arg):
            return not eval_predicate(arg, r)
        case Implies(lhs, rhs):
            return (not eval_predicate(lhs, r)) or eval_predicate(rhs, r)
        case Raw():
            raise RawEvaluationError("raw solver terms need the SMT path")
    if r is NO_ROUTE:
        return False
    match p:
        case LpCmp(op, value):
            return COMPARATORS[op](r.lp, value)
        case LenCmp(op, value):
            return COMPARATORS[op](r.path_len, value)
        case PrefixEq(prefix):
            return r.prefix == prefix
        case HasComm(tag):
            return tag in r.comms
        case Visited(node):
            return node in r.visited
    raise ExprError(f"unknown predicate {p!r}")


def _parse_bound(obj, dist):
    if isinstance(obj, list):
        if len(obj) == 2 and obj[0] == "dist":
            if dist is None or obj[1] not in dist:
                raise ExprError(f"no distance known for {obj[1]!r}")
            return int(dist[obj[1]])
        raise ExprError(f"bad length bound {obj!r}")
    return int(obj)


def parse_predicate(obj, dist: Mapping[str, int] | None = None) -> Predicate:
    """Parse the nested-list predicate syntax.

    ``["dist", v]`` length bounds are resolved to constants through *dist*.
    """
    if obj is True:
        return TRUE
    if obj is False:
        return FALSE
    if not isinstance(obj, list) or not obj:
        raise ExprError(f"bad predicate {obj!r}")
    head, *rest = obj
    try:
        match head:
            case "true":
                return TRUE
            case "false":
                return FALSE
            case "isNoRoute":
                return IsNoRoute()
            case "and":
                return And(tuple(parse_predicate(a, dist) for a in rest))
            case "or":
                return Or(tuple(parse_predicate(a, dist) for a in rest))
            case "not":
                (a,) = rest
                return Not(parse_predicate(a, dist))
            case "implies":
                a, b = rest
                return Implies(parse_predicate(a, dist), parse_predicate(b, dist))
            case "lp" | "len":
                op, bound = rest
                if op not in COMPARATORS:
                    raise ExprError(f"unknown comparator {op!r}")
                if head == "lp":
                    return LpCmp(op, int(bound))
                return LenCmp(op, _parse_bound(bound, dist))
            case "prefix":
                (pfx,) = rest
                return PrefixEq(parse_prefix(pfx))
            case "comm":
                (tag,) = rest
                return HasComm(parse_tag(tag))
            case "visited":
                (node,) = rest
                return Visited(str(node))
            case "raw":
                params, body = rest
                return Raw(tuple(params), str(body))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ExprError):
            raise
        raise ExprError(f"bad predicate {obj!r}: {exc}") from None
    raise ExprError(f"unknown predicate head {head!r}")


def predicate_to_json(p: Predicate):
    match p:
        case TrueP():
            return ["true"]
        case FalseP():
            return ["false"]
        case IsNoRoute():
            return ["isNoRoute"]
        case LpCmp(op, v):
            return ["lp", op, v]
        case LenCmp(op, v):
            return ["len", op, v]
        case PrefixEq(pfx):
            return ["prefix", format_prefix(pfx)]
        case HasComm(tag):
            return ["comm", tag]
        case Visited(node):
            return ["visited", node]
        case And(args):
            return ["and", *(predicate_to_json(a) for a in args)]
        case Or(args):
            return ["or", *(predicate_to_json(a) for a in args)]
        case Not(a):
            return ["not", predicate_to_json(a)]
        case Implies(a, b):
            return ["implies", predicate_to_json(a), predicate_to_json(b)]
        case Raw(params, body):
            return ["raw", list(params), body]
    raise ExprError(f"unknown predicate {p!r}")


def pred(obj, dist=None) -> Predicate:
    """Shorthand for :func:`parse_predicate`."""
    return parse_predicate(obj, dist)


def predicate_literals(p: Predicate):
    """Yield ``(kind, value)`` for every node/tag/prefix literal in *p*."""
    match p:
        case And(args) | Or(args):
            for a in args:
                yield from predicate_literals(a)
        case Not(a):
            yield from predicate_literals(a)
        case Implies(a, b):
            yield from predicate_literals(a)
            yield from predicate_literals(b)
        case Visited(node):
            yield ("node", node)
        case HasComm(tag):
            yield ("tag", tag)
        case PrefixEq(pfx):
            yield ("prefix", pfx)


# -- transfer policies -------------------------------------------------------

@dataclass(frozen=True)
class Action:
    kind: str  # setLp | addComm | removeComm | setPrefix
    value: object


ACTION_KINDS = ("setLp", "addComm", "removeComm", "setPrefix")


@dataclass(frozen=True)
class Clause:
    guard: Predicate
    actions: tuple = ()
    permit: bool = True


Transfer = tuple  # of Clause; an empty tuple denies everything

PERMIT_ALL: Transfer = (Clause(TRUE, (), True),)
DENY_ALL: Transfer = ()


def apply_actions(r: Route, actions) -> Route:
    for a in actions:
        match a.kind:
            case "setLp":
                r = r.replace(lp=a.value)
            case "addComm":
                r = r.replace(comms=r.comms | {a.value})
            case "removeComm":
                r = r.replace(comms=r.comms - {a.value})
            case "setPrefix":
                r = r.replace(prefix=a.value)
            case _:
                raise ExprError(f"unknown action {a.kind!r}")
    return r


def eval_transfer(transfer: Transfer, sender: str, r: AnyRoute) -> AnyRoute:
    """First-match policy evaluation; a permit extends the path by *sender*."""
    if r is NO_ROUTE:
        return NO_ROUTE
    for clause in transfer:
        if eval_predicate(clause.guard, r):
            if not clause.permit:
                return NO_ROUTE
            out = apply_actions(r, clause.actions)
            return out.replace(path_len=out.path_len + 1, visited=out.visited | {sender})
    return NO_ROUTE


def parse_action(obj) -> Action:
    kind, value = obj
    if kind not in ACTION_KINDS:
        raise ExprError(f"unknown action {kind!r}")
    if kind == "setLp":
        value = int(value)
        if value < 0:
            raise ExprError("local preference must be non-negative")
    elif kind == "setPrefix":
        value = parse_prefix(value)
    else:
        value = parse_tag(value)
    return Action(kind, value)


def parse_transfer(obj, dist=None) -> Transfer:
    if obj == "permit":
        return PERMIT_ALL
    if obj == "deny":
        return DENY_ALL
    if not isinstance(obj, list):
        raise ExprError(f"bad transfer {obj!r}")
    clauses = []
    for c in obj:
        verdict = c.get("verdict", "permit")
        if verdict not in ("permit", "deny"):
            raise ExprError(f"bad verdict {verdict!r}")
        clauses.append(Clause(
            parse_predicate(c.get("match", ["true"]), dist),
            tuple(parse_action(a) for a in c.get("actions", ())),
            verdict == "permit",
        ))
    return tuple(clauses)


def transfer_to_json(t: Transfer):
    if t == PERMIT_ALL:
        return "permit"
    if t == DENY_ALL:
        return "deny"
    out = []
    for c in t:
        actions = []
        for a in c.actions:
            v = format_prefix(a.value) if a.kind == "setPrefix" else a.value
            actions.append([a.kind, v])
        out.append({"match": predicate_to_json(c.guard), "actions": actions,
                    "verdict": "permit" if c.permit else "deny"})
    return out


def transfer_literals(t: Transfer):
    for c in t:
        yield from predicate_literals(c.guard)
        for a in c.actions:
            if a.kind in ("addComm", "removeComm"):
                yield ("tag", a.value)
            elif a.kind == "setPrefix":
                yield ("prefix", a.value)
