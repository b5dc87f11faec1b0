import pytest

from airykpz.montecarlo import draw_edge_samples

MC_SEED = 12345
MC_N = 400
MC_KEEP = 48
MC_COUNT = 2000


@pytest.fixture(scope="session")
def edge_samples():
    """The 2000-draw GUE edge ensemble shared by the Monte Carlo tests
    and the acceptance suite (N=400, m=48, fixed seed)."""
    return draw_edge_samples(MC_N, MC_KEEP, MC_SEED, MC_COUNT)
