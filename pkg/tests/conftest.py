import numpy as np
import pytest


@pytest.fixture
def rng():
    """Deterministic generator so sampled tests are reproducible run to run."""
    return np.random.default_rng(20260822)
