"""
Fat-trees: verify, measure tolerance, synthesize
================================================

A pods=4 fat-tree has 20 switches and 64 directed links.  We verify the
reachability benchmark, ask how many CB-edge failures it tolerates, and
then let the HORN solver rediscover interfaces from the BFS CB-graph.
"""

import time

from stablenet.bench import FattreeSpec, gen_fattree, VARIANTS
from stablenet.chc import bfs_cbgraph, emit_chc, solve_chc, validate_solution
from stablenet.smt import SolverConfig
from stablenet.tolerance import tolerance_report
from stablenet.verifier import verify

cfg = SolverConfig(timeout=60)
for variant in VARIANTS:
    net, ifs, _ = gen_fattree(FattreeSpec(4, variant))
    t = time.monotonic()
    v = verify(net, ifs, cfg, jobs=8)
    print(f"{variant:13s} {v.status} {time.monotonic() - t:.1f}s")

net, ifs, dist = gen_fattree(FattreeSpec(4, "Reachability"))
v = verify(net, ifs, cfg, jobs=8)
rep = tolerance_report(v.cb_graph, net)
print("network tolerance", rep.network)

# synthesis only gets Y and a CB-graph
g = bfs_cbgraph(net, {"edge0_0"})
system = emit_chc(net, ifs.Y, g, "simple")
print(system.counts())
sol = solve_chc(system, cfg)
print(type(sol).__name__, validate_solution(sol, net, ifs.Y, g, cfg).status)
print("I(core0) =", sol.interp["core0"][0].body)
