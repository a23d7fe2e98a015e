import numpy as np
import pytest

from qrealism.qmath import DensityOperator

AB = (("A", 2), ("B", 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def bell():
    return DensityOperator.from_ket(np.array([1, 0, 0, 1]) / np.sqrt(2), AB)


@pytest.fixture
def plus_zero():
    """|+> on A, |0> on B."""
    return DensityOperator.from_ket(np.kron([1, 1], [1, 0]) / np.sqrt(2), AB)
