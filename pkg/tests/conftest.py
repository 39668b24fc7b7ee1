import pytest

from stablenet.bench import gen_running_example
from stablenet.smt import SolverConfig
from stablenet.smt.solver import SolverNotFound, resolve_solver


def _have_solver() -> bool:
    try:
        resolve_solver()
    except SolverNotFound:
        return False
    return True


HAVE_SOLVER = _have_solver()
needs_solver = pytest.mark.skipif(not HAVE_SOLVER, reason="no SMT solver on PATH")


@pytest.fixture(scope="session")
def solver():
    if not HAVE_SOLVER:
        pytest.skip("no SMT solver on PATH")
    return SolverConfig(timeout=120)


@pytest.fixture(scope="session")
def running():
    """``(net, pkg1, pkg2)`` for the four-node example."""
    net, (p1, p2) = gen_running_example()
    return net, p1, p2
