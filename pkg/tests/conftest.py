import numpy as np
import pytest

from sgweyl.spectrum import DiscretizationConfig, compute_spectrum


@pytest.fixture(scope="session")
def model_d1_medium():
    """Moderate d=1 model spectrum shared by fit/zeta tests (~2 s)."""
    cfg = DiscretizationConfig(1, 40.0, 8192, scheme_order=4, operator="model")
    return compute_spectrum(cfg, 60)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
