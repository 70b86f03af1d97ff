import numpy as np
import pytest

import helsonspec as hs


@pytest.fixture(scope="session")
def ref_grid():
    return hs.reference_grid()


@pytest.fixture(scope="session")
def mult_hilbert_512():
    return hs.multiplicative_hilbert_matrix(512)


@pytest.fixture(scope="session")
def mult_hilbert_512_values(mult_hilbert_512):
    return hs.eigen_full(mult_hilbert_512.matrix).values


@pytest.fixture(scope="session", autouse=True)
def warm_backend():
    # Trigger jit compilation once so individual tests measure numerics,
    # not compiler startup.
    grid = hs.build_grid(0.5, 5.0, 1, 4)
    hs.discretize_hankel(hs.KernelSpec(hs.KernelFamily.HA, 1.0), grid)
    hs.helson_matrix(1.0, 4)
    mv, dim = hs.helson_operator(1.0, 8)
    mv(np.ones(dim))
