"""Stabilizer Renyi entropy of sector states.

A Pauli string is stored as two L-bit masks: ``flip_mask`` marks sites
carrying x or y, ``y_or_z_mask`` marks sites carrying y or z.  For a basis
configuration c the string has exactly one partner configuration c^flip_mask
with a nonzero matrix element, whose phase is a product of per-site factors:
+1 for identity and x, s_j for z, and -i (+i) for y on an up (down) spin.

The second Renyi entropy sums the fourth powers of all 4^L string
expectations.  Strings whose flip mask has odd popcount take every sector
configuration out of the sector and are skipped; for the rest, the sum over
configurations for all 2^L choices of the y/z mask at fixed flip mask is a
Walsh-Hadamard transform, which the kernel backends exploit.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .hilbert import SpinConfig

MAX_SRE_SITES = 14
MAX_ORACLE_SITES = 8

_RESIDUE_ERROR = 1e-8

_POW_I = (1 + 0j, 1j, -1 + 0j, -1j)


class IntegrityError(RuntimeError):
    """A numerical invariant (realness, positivity) was violated."""


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-site Paulis over L sites."""

    L: int
    flip_mask: int
    y_or_z_mask: int

    def __post_init__(self):
        full = (1 << self.L) - 1
        if not (0 <= self.flip_mask <= full and 0 <= self.y_or_z_mask <= full):
            raise ValueError("Pauli masks exceed the L-bit range")

    @classmethod
    def from_codes(cls, codes):
        """Build from per-site codes (0=I, 1=x, 2=y, 3=z), site 1 first."""
        flip = 0
        yz = 0
        for j, code in enumerate(codes):
            if code not in (0, 1, 2, 3):
                raise ValueError(f"invalid Pauli code {code}")
            if code in (1, 2):
                flip |= 1 << j
            if code in (2, 3):
                yz |= 1 << j
        return cls(L=len(codes), flip_mask=flip, y_or_z_mask=yz)

    @property
    def codes(self):
        out = []
        for j in range(self.L):
            f = (self.flip_mask >> j) & 1
            yz = (self.y_or_z_mask >> j) & 1
            out.append(2 if f and yz else 1 if f else 3 if yz else 0)
        return out


def pauli_matrix_element(config, p):
    """Partner configuration and phase <config|P|partner>.

    The phase has unit modulus; it multiplies conj(C_config) * C_partner in
    the expectation sum.
    """
    bits = config.bits if isinstance(config, SpinConfig) else int(config)
    partner = bits ^ p.flip_mask
    n_y = (p.flip_mask & p.y_or_z_mask).bit_count()
    n_z = (p.y_or_z_mask & ~p.flip_mask).bit_count()
    sign = -1.0 if (bits & p.y_or_z_mask).bit_count() & 1 else 1.0
    if n_z & 1:
        sign = -sign
    phase = _POW_I[n_y & 3] * sign
    return SpinConfig(bits=partner, L=p.L), phase


def pauli_expectation(psi, p):
    """<psi|P|psi> for one Pauli string (real; the exact imaginary part is
    zero, a residue above 1e-8 raises IntegrityError)."""
    basis = psi.basis
    if p.L != basis.L:
        raise ValueError("Pauli string and state have different L")
    partners = basis.configs ^ p.flip_mask
    pidx = basis.rank_table[partners]
    valid = pidx >= 0
    if not np.any(valid):
        return 0.0
    signs = 1.0 - 2.0 * (basis.popcount[basis.configs & p.y_or_z_mask] & 1)
    n_y = (p.flip_mask & p.y_or_z_mask).bit_count()
    n_z = (p.y_or_z_mask & ~p.flip_mask).bit_count()
    pref = _POW_I[n_y & 3] * (-1.0 if n_z & 1 else 1.0)
    raw = pref * np.sum(
        signs[valid] * np.conj(psi.amps[valid]) * psi.amps[pidx[valid]]
    )
    if abs(raw.imag) > _RESIDUE_ERROR:
        raise IntegrityError(f"Pauli expectation has imaginary residue {raw.imag:.3e}")
    return float(raw.real)


def _moment_sums(psi):
    basis = psi.basis
    if basis.L > MAX_SRE_SITES:
        raise ValueError(f"sre supports L <= {MAX_SRE_SITES}, got {basis.L}")
    if abs(np.linalg.norm(psi.amps) - 1.0) > 1e-8:
        raise ValueError("state is not normalized")
    s4, s2, resid = kernels.pauli_moment_sums(
        np.ascontiguousarray(psi.amps),
        basis.configs,
        basis.rank_table,
        basis.popcount,
        basis.L,
    )
    if resid > _RESIDUE_ERROR:
        raise IntegrityError(f"Pauli sums have spurious component {resid:.3e}")
    return s4, s2


def sre(psi):
    """Second stabilizer Renyi entropy: -ln of the normalized fourth moment
    of the Pauli expectation spectrum.  Zero on computational-basis states."""
    s4, _ = _moment_sums(psi)
    val = -math.log(s4 / (1 << psi.basis.L))
    if val < -1e-12:
        raise IntegrityError(f"negative entropy {val:.3e} beyond tolerance")
    return val if val > 0.0 else 0.0


def pauli_purity(psi):
    """(1/2^L) sum_P A_P^2; equals 1 for every normalized pure state."""
    _, s2 = _moment_sums(psi)
    return s2 / (1 << psi.basis.L)


# Dense full-space oracle -----------------------------------------------------

_SIGMA = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def _apply_site(vec, site, mat):
    # bit (site-1) is a block of size 2^(site-1) in the flat index
    blk = 1 << (site - 1)
    v3 = vec.reshape(-1, 2, blk)
    # basis order within the middle axis is (bit=0, bit=1) = (down, up);
    # _SIGMA is written in the (up, down) basis, so flip both axes
    m = mat[::-1, ::-1]
    return np.einsum("ab,xby->xay", m, v3).reshape(-1)


def dense_moment_sums(psi):
    """Full 2^L-space evaluation of (sum_P A_P^4, sum_P A_P^2) by explicit
    per-site matrix action.  Independent of the bit-mask kernel; test oracle."""
    L = psi.basis.L
    if L > MAX_ORACLE_SITES:
        raise ValueError(f"dense oracle supports L <= {MAX_ORACLE_SITES}, got {L}")
    full = np.zeros(1 << L, dtype=np.complex128)
    full[psi.basis.configs] = psi.amps
    bra = full.conj()
    vals4 = []
    vals2 = []

    def rec(site, vec):
        if site > L:
            a = bra @ vec
            if abs(a.imag) > _RESIDUE_ERROR:
                raise IntegrityError("oracle expectation not real")
            vals2.append(a.real**2)
            vals4.append(a.real**4)
            return
        rec(site + 1, vec)  # identity on this site
        for code in (1, 2, 3):
            rec(site + 1, _apply_site(vec, site, _SIGMA[code]))

    rec(1, full)
    return math.fsum(vals4), math.fsum(vals2)


def sre_dense_oracle(psi):
    """Brute-force SRE over the full 2^L space; only for small L in tests."""
    s4, _ = dense_moment_sums(psi)
    val = -math.log(s4 / (1 << psi.basis.L))
    return val if val > 0.0 else 0.0
