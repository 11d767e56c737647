from __future__ import annotations

import numpy as np
import pytest

from slewsim import ControlParams, SatelliteParams
from slewsim.attmath import Quaternion


def random_unit_quaternion(rng: np.random.Generator) -> Quaternion:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return Quaternion(q[:3], q[3])


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def satellite() -> SatelliteParams:
    return SatelliteParams.default()


@pytest.fixture
def control_params() -> ControlParams:
    return ControlParams()
