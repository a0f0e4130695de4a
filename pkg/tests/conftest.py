import numpy as np
import pytest

from siren_harmonics import backend
from siren_harmonics.model import SinusoidalNetwork


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def restore_backend():
    """Let a test switch backends and put the original back afterwards."""
    original = backend.get_backend()
    yield backend
    backend.set_backend(original)


def random_network(rng, width: int, scale: float = 1.0) -> SinusoidalNetwork:
    return SinusoidalNetwork(
        omega=rng.normal(0.0, 2.0, width),
        phi=rng.normal(0.0, 1.0, width),
        hidden_matrix=rng.normal(0.0, scale, (width, width)),
        hidden_bias=rng.normal(0.0, 1.0, width),
        linear_weights=rng.normal(0.0, 1.0, width),
        linear_bias=float(rng.normal()),
    )
