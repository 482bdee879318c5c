from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from mdhom.oracle import random_curve
from mdhom.puiseux import load_curve

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def seeded_curves(**kwargs):
    """Hypothesis strategy: a random curve drawn from an integer seed."""
    return st.integers(0, 2**32 - 1).map(lambda s: random_curve(random.Random(s), **kwargs))


@pytest.fixture(scope="session")
def eggers_curve():
    return load_curve(DATA / "eggers_example.json")


@pytest.fixture(scope="session")
def curve_c():
    return load_curve(DATA / "reducible_C.json")


@pytest.fixture(scope="session")
def curve_d():
    return load_curve(DATA / "reducible_D.json")
