import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from cliffwave.cwt import mexican_hat_clifford
from cliffwave.field import GridSpec
from cliffwave.multivector import Multivector

settings.register_profile(
    "numeric",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("numeric")

coeff = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)


@st.composite
def multivectors(draw, n=None, complex_=True):
    n = draw(st.integers(1, 4)) if n is None else n
    re = draw(st.lists(coeff, min_size=1 << n, max_size=1 << n))
    im = draw(st.lists(coeff, min_size=1 << n, max_size=1 << n)) if complex_ else [0.0] * (1 << n)
    return Multivector(n, np.array(re) + 1j * np.array(im))


@st.composite
def multivector_pairs(draw, count=2):
    n = draw(st.integers(1, 4))
    return tuple(draw(multivectors(n)) for _ in range(count))


@pytest.fixture(scope="session")
def grid128():
    return GridSpec(2, 128, 8.0)


@pytest.fixture(scope="session")
def grid32():
    return GridSpec(2, 32, 8.0)


@pytest.fixture(scope="session")
def psi32(grid32):
    return mexican_hat_clifford(grid32)


@pytest.fixture(scope="session")
def psi128(grid128):
    return mexican_hat_clifford(grid128)
