"""Brute-force k-fail-connectivity by enumerating edge removals."""
from itertools import combinations

from stablenet.verifier import reachable


def brute_tolerance(roots, edges, v, cap=None):
    """Largest k such that every removal of k edges keeps *v* reachable."""
    if v in roots:
        return float("inf")
    edges = list(edges)
    limit = len(edges) if cap is None else cap
    if v not in reachable(roots, edges):
        return -1
    for k in range(1, limit + 1):
        for cut in combinations(edges, k):
            rest = [e for e in edges if e not in cut]
            if v not in reachable(roots, rest):
                return k - 1
    return limit
