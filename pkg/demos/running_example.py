"""
Verifying the four-node example
===============================

Two interface packages for the same network.  The first only promises that
E ends up with some route; the second pins down preferences and lengths so
that E is known to avoid C.  Needs ``z3`` on PATH.
"""

from stablenet.bench import gen_running_example
from stablenet.smt import SolverConfig
from stablenet.verifier import verify
from stablenet.tolerance import tolerance_report

net, (pkg1, pkg2) = gen_running_example()
print("nodes:", net.nodes)
print("links:", ", ".join(f"{u}->{v}" for u, v in net.edges))

# the loose package: every edge propagates convergence
cfg = SolverConfig(timeout=30)
v1 = verify(net, pkg1, cfg, jobs=4)
print(v1.status, sorted(v1.cb_graph.edges))

# the tight package has fewer CB-edges, but A still reaches everything
v2 = verify(net, pkg2, cfg, jobs=4)
print(v2.status, sorted(v2.cb_graph.edges))

# how many CB-edge losses each package survives
for name, v in (("pkg1", v1), ("pkg2", v2)):
    rep = tolerance_report(v.cb_graph, net)
    print(name, rep.to_json()["perNode"])

# break the property at E and look at the triage
from stablenet.expr import LenCmp, NOT_NO_ROUTE, conj
from stablenet.network import Interfaces

bad = Interfaces(pkg2.I, pkg2.Q, dict(pkg2.Y, E=conj(NOT_NO_ROUTE, LenCmp("=", 1))))
v3 = verify(net, bad, cfg)
print(v3.status)
for f in v3.failures:
    print(f.triage.render())
