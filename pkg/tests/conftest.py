import numpy as np
import pytest

from saddletower.config import Configuration


def random_config(rng, layers=None, max_layers=4, max_n=4):
    """Random valid configuration with Theta_1 = 0 (Theta_2 generally nonzero)."""
    if layers is None:
        L = int(rng.integers(1, max_layers + 1))
        layers = [int(n) for n in rng.integers(1, max_n + 1, L)]
    nodes = []
    for n in layers:
        r = np.exp(rng.normal(0, 0.7, n))
        a = rng.uniform(-np.pi, np.pi, n)
        nodes.append(r * np.exp(1j * a))
    theta = rng.normal(0, 1, 2 * (len(layers) + 1))
    theta -= theta.mean()
    return Configuration.from_flat(layers, nodes, theta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def roots_of_unity(n):
    return np.exp(2j * np.pi * np.arange(1, n + 1) / n)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose the call-phase outcome to fixtures (used by the acceptance report)
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
