import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spinmagic.hilbert import StateVector, enumerate_basis

_BASES = {}


@pytest.fixture
def basis_of():
    def get(L):
        if L not in _BASES:
            _BASES[L] = enumerate_basis(L)
        return _BASES[L]

    return get


@pytest.fixture
def random_state(basis_of):
    def make(L, seed):
        basis = basis_of(L)
        rng = np.random.default_rng(seed)
        z = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
        return StateVector(basis, z / np.linalg.norm(z))

    return make
