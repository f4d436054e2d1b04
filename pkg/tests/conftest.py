import pytest

from genboson.qspecial import DeformationParams


@pytest.fixture
def params():
    return DeformationParams(1.3, 2.0, 1.0)


@pytest.fixture
def params_generic():
    return DeformationParams(1.7, 0.8, 0.55)
