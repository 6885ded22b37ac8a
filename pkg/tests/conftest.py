import numpy as np
import pytest

from tetrafill import FourSpinState, Spin, build_basis

HALF = Spin(1)


@pytest.fixture(scope="session")
def basis_half():
    return build_basis((HALF,) * 4)


@pytest.fixture(scope="session")
def basis_one():
    return build_basis((Spin(2),) * 4)


def singlet_pair_state() -> FourSpinState:
    """singlet(1,2) x singlet(3,4) for four spin-1/2 slots."""
    s = np.zeros((2, 2), dtype=complex)
    s[0, 1] = 1 / np.sqrt(2)
    s[1, 0] = -1 / np.sqrt(2)
    amps = np.einsum("ab,cd->abcd", s, s)
    return FourSpinState((HALF,) * 4, amps)


def ghz_state() -> FourSpinState:
    amps = np.zeros((2, 2, 2, 2), dtype=complex)
    amps[0, 0, 0, 0] = 1 / np.sqrt(2)
    amps[1, 1, 1, 1] = 1 / np.sqrt(2)
    return FourSpinState((HALF,) * 4, amps)


def random_state(j: Spin, rng) -> FourSpinState:
    shape = (j.dim,) * 4
    amps = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return FourSpinState((j,) * 4, amps / np.linalg.norm(amps))


REGULAR_TETRAHEDRON = np.array(
    [[1, -1, -1], [-1, -1, 1], [1, 1, 1], [-1, 1, -1]], dtype=float
) / np.sqrt(3)
