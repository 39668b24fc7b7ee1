"""
Fair schedules as numpy arrays
==============================

``alpha`` is a (T+1, |V|) boolean activation matrix and ``beta`` a
(|E|, T+1) matrix of send times.  We draw a few, run them, and watch the
running example settle.
"""

import numpy as np

from stablenet.bench import gen_running_example
from stablenet.simulator import (FairnessProfile, convergence_bound,
                                 fairness_lemma_check, random_fair_schedule, run)

net, (_, pkg2) = gen_running_example()
prof = FairnessProfile(ea_period=2, ef_lag=3)
H = convergence_bound(net, prof)
print("horizon", H)

sched = random_fair_schedule(net, seed=1, horizon=H, profile=prof)
print(sched.alpha.astype(int))
print(sched.beta)

# staleness of every delivery: t - beta(t), never above ef_lag
lag = np.arange(H + 1)[None, 1:] - sched.beta[:, 1:]
print("max lag per edge", lag.max(axis=1))

tr = run(net, sched)
for v in net.nodes:
    print(v, tr[v, H])

# B->E frozen at time 0, when B had nothing yet: E falls back to the path via C
down = FairnessProfile(2, 3, failed_edges={("B", "E")})
tr2 = run(net, random_fair_schedule(net, 1, H, down))
print("E without B->E:", tr2["E", H])

print(fairness_lemma_check(sched).ok)
