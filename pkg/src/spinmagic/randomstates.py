"""Reference random states on the zero-magnetization sector."""

import math

import numpy as np

from .hilbert import StateVector


def random_phase_state(basis, rng):
    """Equal-modulus state with i.i.d. uniform phases in [0, 2pi)."""
    phases = rng.uniform(0.0, 2.0 * np.pi, size=basis.dim)
    amps = np.exp(-1j * phases) / math.sqrt(basis.dim)
    return StateVector(basis, amps)


def haar_state(basis, rng):
    """Uniformly random unit vector on the sector sphere (normalized
    complex Gaussian, distributionally a Haar-random matrix column)."""
    z = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    return StateVector(basis, z / np.linalg.norm(z))
