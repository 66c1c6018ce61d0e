import numpy as np
import pytest

from app.geometry.canonical import type_a_cube


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def cube_a1():
    return type_a_cube(1.0, 2.0, 3.0)


@pytest.fixture
def client():
    from fastapi.testclient import TestClient

    from app import create_app

    return TestClient(create_app())
