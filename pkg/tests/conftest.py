import numpy as np
import pytest

from oddperiodic import OddPeriodicFunction


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def make_random_odd():
    """Factory for random sine polynomials: (rng, max_modes, period range)."""

    def factory(rng, max_modes=64, t_range=(0.5, 20.0)):
        modes = int(rng.integers(1, max_modes + 1))
        period = float(rng.uniform(*t_range))
        coeffs = rng.uniform(-1.0, 1.0, modes)
        return OddPeriodicFunction(period, coeffs)

    return factory
