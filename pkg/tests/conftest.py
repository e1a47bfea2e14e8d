import pytest

from configs import paths
from src.geometry.core import Body, Point2
from src.utils.body_loader import load_body


@pytest.fixture(scope="session")
def square2() -> Body:
    return load_body(paths.SQUARE2_JSON)


@pytest.fixture(scope="session")
def disc1() -> Body:
    return load_body(paths.DISC1_JSON)


@pytest.fixture(scope="session")
def stadium() -> Body:
    return load_body(paths.STADIUM_JSON)


@pytest.fixture(scope="session")
def tri_eq() -> Body:
    return load_body(paths.TRI_EQ_JSON)


@pytest.fixture(scope="session")
def rounded_triangle() -> Body:
    return load_body(paths.ROUNDED_TRIANGLE_JSON)


@pytest.fixture
def origin() -> Point2:
    return Point2(0.0, 0.0)
