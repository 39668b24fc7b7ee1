"""Simulation oracle for verifier soundness on small networks."""
import itertools
import random

from stablenet.bench import FattreeSpec, gen_fattree, gen_running_example
from stablenet.expr import (
    FALSE,
    NOT_NO_ROUTE,
    TRUE,
    Action,
    Clause,
    HasComm,
    LenCmp,
    LpCmp,
    Not,
    Visited,
    conj,
    disj,
)
from stablenet.network import Interfaces, Network
from stablenet.route import NO_ROUTE, Route
from stablenet.simulator import (
    FairnessProfile,
    check_abstract_convergence,
    check_invariant,
    convergence_bound,
    quiescent,
    random_fair_schedule,
    run,
)


def replace(ifs, table, v, p):
    parts = {k: dict(getattr(ifs, k)) for k in ("I", "Q", "Y")}
    parts[table][v] = p
    return Interfaces(parts["I"], parts["Q"], parts["Y"])


def mutants(net, ifs, seed, n):
    """Deterministic interface mutations: weaken, strengthen, or swap atoms."""
    rng = random.Random(seed)
    atoms = [TRUE, FALSE, NOT_NO_ROUTE, LpCmp("=", 100), LpCmp(">=", 200), LenCmp("<=", 1),
             LenCmp(">=", 2)] + [Not(Visited(v)) for v in net.nodes]
    out = []
    for _ in range(n):
        table = rng.choice("IQY")
        v = rng.choice(net.nodes)
        old = getattr(ifs, table)[v]
        a = rng.choice(atoms)
        new = rng.choice([a, conj(old, a), disj(old, a), conj(NOT_NO_ROUTE, a)])
        out.append(replace(ifs, table, v, new))
    return out


def random_network(seed):
    rng = random.Random(seed)
    n = rng.randrange(3, 6)
    nodes = tuple("abcde"[:n])
    pairs = [(u, v) for u, v in itertools.permutations(nodes, 2) if rng.random() < 0.6]
    # keep it connected from the origin "a"
    for v in nodes[1:]:
        if not any(e[1] == v for e in pairs):
            pairs.append((rng.choice([u for u in nodes if u != v]), v))
    transfer = {}
    for e in pairs:
        clauses = []
        if rng.random() < 0.3:
            clauses.append(Clause(LenCmp(">=", rng.randrange(1, 4)), (), False))
        if rng.random() < 0.3:
            clauses.append(Clause(HasComm("1:0"), (), False))
        acts = [Action("setLp", rng.choice((100, 100, 200, 300)))]
        if rng.random() < 0.3:
            acts.append(Action("addComm", "1:0"))
        clauses.append(Clause(TRUE, tuple(acts), True))
        transfer[e] = tuple(clauses)
    init = {v: NO_ROUTE for v in nodes}
    init["a"] = Route(lp=100)
    net = Network(nodes, tuple(pairs), init, transfer, ("1:0",))
    reach = Interfaces({v: TRUE for v in nodes}, {v: NOT_NO_ROUTE for v in nodes},
                       {v: NOT_NO_ROUTE for v in nodes})
    return net, reach


def corpus(n_mutants=12, n_random=12):
    """``[(name, net, ifs)]``; every entry has at most five nodes."""
    items = []
    net, (p1, p2) = gen_running_example()
    items += [("fig1-pkg1", net, p1), ("fig1-pkg2", net, p2)]
    for i, m in enumerate(mutants(net, p2, 1, n_mutants)):
        items.append((f"fig1-pkg2-mut{i}", net, m))
    for i, m in enumerate(mutants(net, p1, 2, n_mutants // 2)):
        items.append((f"fig1-pkg1-mut{i}", net, m))
    # policy mutation: the B->E link no longer raises local preference
    t = dict(net.transfer)
    t[("B", "E")] = (Clause(TRUE, (Action("setLp", 100),), True),)
    flat = Network(net.nodes, net.edges, net.init, t)
    items.append(("fig1-flat-lp", flat, p2))
    for variant in ("Reachability", "PathLength", "ValleyFree"):
        fnet, fifs, _ = gen_fattree(FattreeSpec(2, variant))
        items.append((f"fattree2-{variant}", fnet, fifs))
    for s in range(n_random):
        rnet, rifs = random_network(s)
        items.append((f"random{s}", rnet, rifs))
    return items


def simulate_instance(net, ifs, seeds, failed=frozenset(), tail=8):
    """Run fair schedules; return a list of violation descriptions."""
    bad = []
    for seed in seeds:
        rng = random.Random(seed)
        prof = FairnessProfile(rng.randrange(1, 5), rng.randrange(1, 5), failed,
                               cutoff=rng.randrange(0, 6))
        horizon = convergence_bound(net, prof) + tail
        # prefer a quiescent ending, but a correct network may keep changing
        # concrete routes inside Q forever (e.g. path lengths growing around
        # a high-preference cycle), so the window is checked regardless
        for _ in range(3):
            tr = run(net, random_fair_schedule(net, seed, horizon, prof))
            if quiescent(tr, tail):
                break
            horizon *= 2
        for v, t in check_invariant(tr, ifs.I)[:1]:
            bad.append((seed, f"I({v}) broken at t={t}: {tr[v, t]!r}"))
        for v, ok in check_abstract_convergence(tr, ifs.Y, tail).items():
            if not ok:
                bad.append((seed, f"Y({v}) fails in the final window: {tr[v, tr.horizon]!r}"))
    return bad
