import random

import pytest

from kummer3.curve import new_curve
from kummer3.remnants import derive_duplication

SPLIT = [0, 720, -1764, 1624, -735, 175, -21, 1]   # X(X-1)...(X-6)


@pytest.fixture(scope="session")
def split_q():
    return new_curve(SPLIT)


@pytest.fixture(scope="session")
def split_q_duplication(split_q):
    """Duplication quartics for the split curve over Q (about a minute to derive)."""
    return derive_duplication(split_q, random.Random(34))
