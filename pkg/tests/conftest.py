import numpy as np
import pytest

from disopt.config import preset_config
from disopt.harness import run_single

PRESET_NAMES = ("fig2a", "fig2b", "fig2c")


@pytest.fixture(scope="session")
def preset_runs():
    """All three preset scenarios executed over their full seed lists.

    Shared across the engine and acceptance tests to keep the suite fast;
    runs are deterministic so sharing is safe.
    """
    runs = {}
    for name in PRESET_NAMES:
        cfg = preset_config(name)
        runs[name] = (cfg, [run_single(cfg, seed) for seed in cfg.seeds])
    return runs


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
