from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings

from finhom import fixtures

DATA = Path(__file__).parent / "data"

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def S():
    return fixtures.pseudo_circle()


@pytest.fixture
def W():
    return fixtures.contractible_five_point()


@pytest.fixture
def C2():
    return fixtures.chain2()


@pytest.fixture
def data_dir():
    return DATA
