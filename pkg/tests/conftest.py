import math

import numpy as np
import pytest

from prodhyp import log_utils
from prodhyp.ambient import SpaceForm
from prodhyp.base_catalog import BaseKind, make_base


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)

@pytest.fixture
def sphere4() -> SpaceForm:
    return SpaceForm.create(1, 4)

@pytest.fixture
def hyperbolic4() -> SpaceForm:
    return SpaceForm.create(-1, 4)

@pytest.fixture
def sphere_base(sphere4):
    """
    Geodesic sphere of radius pi/4 in S^4, lam^g = 1
    """
    return make_base(sphere4, BaseKind.GEODESIC_SPHERE, r=math.pi / 4)

@pytest.fixture(autouse=True)
def _reset_logging(monkeypatch):
    monkeypatch.delenv("VERBOSE_LOGS", raising=False)
    yield
    log_utils.shutdown()
