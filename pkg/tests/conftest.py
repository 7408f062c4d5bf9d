import pytest

from lisdist import montecarlo, painleve
from lisdist.rng import SeededStream

SWEEP_SEED = 20240612
SWEEP_SAMPLES = 10_000
SWEEP_NS = (10_000, 100_000, 1_000_000)


@pytest.fixture(scope="session")
def hm_solution():
    return painleve.solve_hastings_mcleod()


@pytest.fixture(scope="session")
def tw_table(hm_solution):
    return painleve.tracy_widom_table(hm_solution, painleve.default_t_grid())


@pytest.fixture(scope="session")
def mc_sweep():
    """The big LIS sample sweep, shared by the Monte Carlo acceptance tests.

    Returns (sweep, elapsed seconds) so the acceptance tests can charge the
    shared sampling cost against their runtime budgets.
    """
    import time
    t0 = time.time()
    out = []
    for i, N in enumerate(SWEEP_NS):
        stream = SeededStream(SWEEP_SEED, i)
        out.append((N, montecarlo.sample_lis(N, SWEEP_SAMPLES, stream, shards=8)))
    return out, time.time() - t0
