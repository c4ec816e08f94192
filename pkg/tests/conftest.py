import os
import sys

# Make the sibling oracles.py importable regardless of how pytest was invoked.
sys.path.insert(0, os.path.dirname(__file__))

import pytest

from algobench import tokens


@pytest.fixture(autouse=True)
def _clean_token_coefficients():
    """Keep estimator coefficient overrides from leaking between tests."""
    tokens.reset_coefficients()
    yield
    tokens.reset_coefficients()
