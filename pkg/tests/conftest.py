import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")


@pytest.fixture
def two_point():
    from distspec.measure import DiscreteMeasure

    return DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5], label="two_point")


def midpoint_interval(n: int):
    """Equal-weight midpoints of [0, 1]: a deterministic stand-in for Lebesgue measure."""
    from distspec.measure import DiscreteMeasure

    return DiscreteMeasure(((np.arange(n) + 0.5) / n).reshape(-1, 1), np.full(n, 1.0 / n), label=f"mid{n}")
