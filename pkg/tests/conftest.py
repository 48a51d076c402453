import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypwalk.lattice import group_fixture


@pytest.fixture(scope="session")
def gamma2():
    return group_fixture("gamma2")


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
