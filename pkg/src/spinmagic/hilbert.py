"""Zero-magnetization basis of an L-site spin-1/2 chain.

Spin configurations are L-bit integers: bit (j-1) holds site j, a set bit
means spin up (s_j = +1).  The sector with total z magnetization zero
contains the C(L, L/2) words with exactly L/2 set bits, kept in ascending
integer order.  Ranking and unranking use the combinatorial number system,
so no lookup into the config list is ever required.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

MAX_SITES = 16


def _check_sites(L):
    if L % 2 != 0 or L < 2 or L > MAX_SITES:
        raise ValueError(f"L must be even with 2 <= L <= {MAX_SITES}, got {L}")


def site_bit(j):
    """Bit mask of site j (1-based)."""
    return 1 << (j - 1)


@dataclass(frozen=True)
class SpinConfig:
    """One basis configuration: `bits` with popcount L/2."""

    bits: int
    L: int

    def spin(self, j):
        """s_j = +/-1 for site j (1-based)."""
        return 1 if self.bits & site_bit(j) else -1


@dataclass
class SubspaceBasis:
    """Ordered zero-magnetization sector of L sites."""

    L: int
    configs: np.ndarray  # ascending int64 words, popcount L/2 each
    dim: int
    _rank_table: np.ndarray | None = field(default=None, repr=False)
    _popcount: np.ndarray | None = field(default=None, repr=False)
    _signs: np.ndarray | None = field(default=None, repr=False)

    @property
    def rank_table(self):
        """Word -> sector index over the full 2^L space, -1 outside the sector."""
        if self._rank_table is None:
            table = np.full(1 << self.L, -1, dtype=np.int32)
            table[self.configs] = np.arange(self.dim, dtype=np.int32)
            table.flags.writeable = False
            self._rank_table = table
        return self._rank_table

    @property
    def popcount(self):
        """Popcount of every word in the full 2^L space (uint8)."""
        if self._popcount is None:
            n = 1 << self.L
            pop = np.zeros(n, dtype=np.uint8)
            for i in range(1, n):
                pop[i] = pop[i >> 1] + (i & 1)
            pop.flags.writeable = False
            self._popcount = pop
        return self._popcount

    @property
    def signs(self):
        """(dim, L) matrix of s_j = +/-1 per config and site."""
        if self._signs is None:
            shifts = np.arange(self.L, dtype=np.int64)
            bits = (self.configs[:, None] >> shifts[None, :]) & 1
            signs = (2.0 * bits - 1.0).astype(np.float64)
            signs.flags.writeable = False
            self._signs = signs
        return self._signs


def enumerate_basis(L):
    """Enumerate the S^z = 0 sector of L spins in ascending word order."""
    _check_sites(L)
    half = L // 2
    dim = comb(L, half)
    configs = np.empty(dim, dtype=np.int64)
    # Gosper's hack walks same-popcount words in increasing order.
    v = (1 << half) - 1
    for i in range(dim):
        configs[i] = v
        c = v & -v
        r = v + c
        v = (((r ^ v) >> 2) // c) | r
    configs.flags.writeable = False
    return SubspaceBasis(L=L, configs=configs, dim=dim)


def rank(basis, config):
    """Sector index of `config` via the combinatorial number system."""
    bits = config.bits if isinstance(config, SpinConfig) else int(config)
    if bits < 0 or bits >= (1 << basis.L) or bits.bit_count() != basis.L // 2:
        raise ValueError(f"config {bits:#x} is not in the S^z=0 sector of L={basis.L}")
    r = 0
    i = 0
    for p in range(basis.L):
        if bits & (1 << p):
            i += 1
            r += comb(p, i)
    return r


def unrank(basis, index):
    """Inverse of :func:`rank`."""
    if not 0 <= index < basis.dim:
        raise ValueError(f"index {index} out of range [0, {basis.dim})")
    half = basis.L // 2
    r = index
    bits = 0
    for i in range(half, 0, -1):
        p = i - 1
        while comb(p + 1, i) <= r:
            p += 1
        bits |= 1 << p
        r -= comb(p, i)
    return SpinConfig(bits=bits, L=basis.L)


@dataclass
class StateVector:
    """Complex amplitudes over a SubspaceBasis, unit norm."""

    basis: SubspaceBasis
    amps: np.ndarray

    def copy(self):
        return StateVector(self.basis, self.amps.copy())

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalize(self):
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero state")
        self.amps /= n
        return self


def zero_state(basis):
    return StateVector(basis, np.zeros(basis.dim, dtype=np.complex128))


def neel_state(basis):
    """|up, down, up, down, ...>: spin up on odd sites j."""
    bits = 0
    for j in range(1, basis.L + 1, 2):
        bits |= site_bit(j)
    psi = zero_state(basis)
    psi.amps[rank(basis, bits)] = 1.0
    return psi
