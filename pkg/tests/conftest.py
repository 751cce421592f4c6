import numpy as np
import pytest

from bewitness import BipartiteDims, padded_real_upb, tiles_upb

# Frozen outputs of the seeded searches; recomputed values must stay within
# the tolerances asserted in the tests that use them.
TILES_LAMBDA_GOLDEN = 0.0284162133357304
RHO1_INFEASIBLE_RESIDUAL_GOLDEN = 0.1080022987152490  # member-1 mixture, weight 0.1


@pytest.fixture(scope="session")
def dims3():
    return BipartiteDims.square(3)


@pytest.fixture(scope="session")
def tiles():
    return tiles_upb()


@pytest.fixture(scope="session")
def padded4():
    return padded_real_upb(4)


def random_hermitian(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2.0
