import pytest
from hypothesis import HealthCheck, settings

import brierdecomp as bd

settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture
def d1():
    return bd.make_dataset([(0.8, 1), (0.2, 0), (0.6, 1), (0.4, 0)])
