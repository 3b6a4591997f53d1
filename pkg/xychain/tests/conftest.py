"""shared fixtures"""

import math

import pytest

from xychain.schemas import InputState
from xychain.services.chain_model import build_chain


@pytest.fixture
def weak_chain():
    """weak-field chain, N=5, gamma=0.5"""
    return build_chain(1.0, 0.5, 0.1, 5)


@pytest.fixture
def encoded_state():
    """sqrt(3)/2 |0> + 1/2 |1>"""
    return InputState.from_alpha(math.sqrt(3.0) / 2.0)
