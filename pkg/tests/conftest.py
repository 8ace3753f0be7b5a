import os
import random
import sys

import pytest

# Ensure project root is on sys.path regardless of where pytest is run from
_PROJECT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if _PROJECT_DIR not in sys.path:
    sys.path.insert(0, _PROJECT_DIR)

from config import RunConfig  # noqa: E402  (after path fix)


@pytest.fixture
def rng():
    """Random source for property tests; COMPACT3_SEED picks the sample."""
    return random.Random(RunConfig.from_env().seed)
