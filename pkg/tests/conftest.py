import numpy as np
import pytest

from bregc.gaussian import gaussian_generator, pack, source_to_natural, GaussianSource
from bregc.generators import (make_bit_entropy, make_extended_kl, make_itakura_saito,
                              make_multinomial, make_squared_euclidean)

# Acceptance results collected for the terminal summary.
ACCEPTANCE_LINES = []


def random_spd(rng, d, spread=1.0):
    a = rng.normal(size=(d, d))
    return spread * (a @ a.T) / d + 0.3 * np.eye(d)


def random_normal(rng, d):
    return GaussianSource(rng.normal(size=d), random_spd(rng, d))


def sample(name, rng, d):
    """A random admissible point for the generator ``name`` in dimension d."""
    if name == "sqeuclid":
        return rng.normal(size=d) * 2
    if name in ("extkl", "itakura-saito"):
        return rng.uniform(0.1, 5.0, size=d)
    if name == "bit-entropy":
        return rng.uniform(0.02, 0.98, size=d)
    if name == "multinomial":
        return rng.normal(size=d) * 2
    if name == "gaussian":
        n = source_to_natural(random_normal(rng, d))
        return pack(n.theta, n.Theta)
    raise KeyError(name)


def build(name, d):
    return {
        "sqeuclid": make_squared_euclidean,
        "extkl": make_extended_kl,
        "itakura-saito": make_itakura_saito,
        "bit-entropy": make_bit_entropy,
        "multinomial": lambda k: make_multinomial(k + 1),
        "gaussian": gaussian_generator,
    }[name](d)


SEPARABLE = ["sqeuclid", "extkl", "itakura-saito", "bit-entropy"]
ALL_NAMES = SEPARABLE + ["multinomial", "gaussian"]


@pytest.fixture
def rng():
    return np.random.default_rng(20071)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
