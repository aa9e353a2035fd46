import sys
from pathlib import Path

import pytest

from vbgap.matching import Max3dmInstance, generate_e2

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def q2_e2() -> Max3dmInstance:
    # Every element occurs exactly twice; optimum matching is 1.
    return Max3dmInstance(q=2, tuples=((1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)))


@pytest.fixture(scope="session")
def q3_e2() -> Max3dmInstance:
    return generate_e2(3, seed=1)
