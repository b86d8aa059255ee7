import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toolate.protocol import Trine


@pytest.fixture
def trine() -> Trine:
    return Trine.default()


@pytest.fixture
def rand() -> np.random.Generator:
    return np.random.default_rng(20240811)


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)
