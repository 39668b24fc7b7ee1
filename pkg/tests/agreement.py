"""Fuzzed cross-check of concrete evaluation against solver evaluation.

Each case is one of ``("pred", p, r)``, ``("merge", a, b)`` or
``("transfer", e, r)``; the solver evaluates the encoded term on encoded
literals and the decoded answer must equal the concrete one.
"""
import random

from stablenet.expr import (
    Action,
    And,
    Clause,
    FalseP,
    HasComm,
    Implies,
    IsNoRoute,
    LenCmp,
    LpCmp,
    Not,
    Or,
    PrefixEq,
    TrueP,
    Visited,
    eval_predicate,
)
from stablenet.network import Network, apply_transfer
from stablenet.route import NO_ROUTE, Route
from stablenet.smt import Encoder, get_values
from stablenet.smt.sexpr import atom_value

NODES = ("A", "B", "C", "D", "E")
TAGS = ("1:0", "100:2", "65535:65535")
PREFIXES = (0x0A000000, 0xC0A80000, 0x00000001)
OPS = ("=", "!=", "<", "<=", ">", ">=")


def rand_route(rng: random.Random):
    if rng.random() < 0.15:
        return NO_ROUTE
    return Route(
        prefix=rng.choice(PREFIXES),
        lp=rng.choice((0, 50, 100, 100, 200, 300, rng.randrange(0, 400))),
        path_len=rng.randrange(0, 6),
        visited=frozenset(v for v in NODES if rng.random() < 0.3),
        comms=frozenset(t for t in TAGS if rng.random() < 0.3),
    )


def rand_pred(rng: random.Random, depth: int = 3):
    if depth == 0 or rng.random() < 0.35:
        k = rng.randrange(9)
        if k == 0:
            return IsNoRoute()
        if k == 1:
            return rng.choice((TrueP(), FalseP()))
        if k == 2:
            return LpCmp(rng.choice(OPS), rng.choice((0, 100, 200, 300)))
        if k == 3:
            return LenCmp(rng.choice(OPS), rng.randrange(0, 5))
        if k == 4:
            return PrefixEq(rng.choice(PREFIXES))
        if k in (5, 6):
            return HasComm(rng.choice(TAGS))
        return Visited(rng.choice(NODES))
    k = rng.randrange(4)
    if k == 0:
        return And(tuple(rand_pred(rng, depth - 1) for _ in range(rng.randrange(1, 4))))
    if k == 1:
        return Or(tuple(rand_pred(rng, depth - 1) for _ in range(rng.randrange(1, 4))))
    if k == 2:
        return Not(rand_pred(rng, depth - 1))
    return Implies(rand_pred(rng, depth - 1), rand_pred(rng, depth - 1))


def rand_transfer(rng: random.Random):
    clauses = []
    for _ in range(rng.randrange(0, 4)):
        actions = []
        for _ in range(rng.randrange(0, 3)):
            kind = rng.choice(("setLp", "addComm", "removeComm", "setPrefix"))
            if kind == "setLp":
                val = rng.choice((0, 100, 300))
            elif kind == "setPrefix":
                val = rng.choice(PREFIXES)
            else:
                val = rng.choice(TAGS)
            actions.append(Action(kind, val))
        clauses.append(Clause(rand_pred(rng, 2), tuple(actions), rng.random() < 0.75))
    return tuple(clauses)


def fuzz_network(seed: int) -> Network:
    rng = random.Random(seed)
    edges = [(u, v) for u in NODES for v in NODES if u != v]
    init = {v: NO_ROUTE for v in NODES}
    return Network(NODES, edges, init, {e: rand_transfer(rng) for e in edges}, TAGS)


def fuzz_cases(seed: int, n: int, net: Network):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        k = rng.random()
        if k < 0.4:
            out.append(("pred", rand_pred(rng), rand_route(rng)))
        elif k < 0.7:
            out.append(("merge", rand_route(rng), rand_route(rng)))
        else:
            out.append(("transfer", rng.choice(net.edges), rand_route(rng)))
    return out


def expected(case, net):
    kind, x, y = case
    if kind == "pred":
        return eval_predicate(x, y)
    if kind == "merge":
        return net.merge(x, y)
    return apply_transfer(x, y, net)


def check_agreement(cases, net, config, profile="full", batch=400):
    """Return the list of ``(case, concrete, solver)`` mismatches."""
    enc = Encoder(net, profile)
    mismatches = []
    for start in range(0, len(cases), batch):
        chunk = cases[start:start + batch]
        terms, spans = [], []
        for kind, x, y in chunk:
            if kind == "pred":
                spans.append((len(terms), 1))
                terms.append(("Bool", enc.predicate(x, enc.literal(y))))
            else:
                if kind == "merge":
                    t = enc.merge(enc.literal(x), enc.literal(y))
                else:
                    t = enc.transfer(x, enc.literal(y))
                spans.append((len(terms), 6))
                terms += list(zip(enc.sorts, t.fields()))
        vals = get_values(enc, terms, config)
        for case, (i, n) in zip(chunk, spans):
            got = [atom_value(v) for v in vals[i:i + n]]
            got = got[0] if n == 1 else enc.decode_fields(got)
            want = expected(case, net)
            if got != want:
                mismatches.append((case, want, got))
    return mismatches
