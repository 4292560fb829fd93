import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xD1AC)


@pytest.fixture
def config(tmp_path) -> dict:
    """Minimal config that keeps logs inside the test's tmp dir."""
    return {
        "project": {"name": "dirac-sharp", "version": "1.0.0", "timezone": "UTC"},
        "paths": {"logs_dir": str(tmp_path / "logs"), "output_dir": str(tmp_path / "output")},
        "defaults": {"seed": 0xD1AC, "n": 2, "k": 1, "m_max": 4, "band_limit": 2, "trials": 5, "kernel_trials": 1},
        "tolerances": {},
        "parallel": {"threads": 1},
    }
