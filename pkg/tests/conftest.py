from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from core.dataset import Dataset
from core.rng import RngStream

FIXTURES = Path(__file__).parent / "fixtures"
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def fixture_csv() -> Path:
    return FIXTURES / "two_sample_40.csv"


@pytest.fixture
def two_sample_data(fixture_csv) -> Dataset:
    return Dataset.from_frame(pd.read_csv(fixture_csv), "y", ["x"])


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


@pytest.fixture
def rng() -> RngStream:
    return RngStream(20220101)


@pytest.fixture
def linear_data() -> Dataset:
    """y = 1 + 2 x1 - 0.5 x2 + noise on 30 rows, fixed draws."""
    gen = np.random.default_rng(7)
    x = gen.normal(size=(30, 2))
    y = 1.0 + 2.0 * x[:, 0] - 0.5 * x[:, 1] + 0.3 * gen.normal(size=30)
    return Dataset(y, x, ("x1", "x2"))
