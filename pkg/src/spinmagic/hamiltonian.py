"""XXZ-staggered and SYK Hamiltonians on the zero-magnetization sector.

Conventions: sites j = 1..L map to bits j-1, the staggered sign is (-1)^j
with 1-based j, spin chains use periodic boundaries, and the string
operators in the SYK model multiply sigma^z over all sites left of their
own (1-based, exclusive).
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse

from . import kernels
from .hilbert import SubspaceBasis

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class XxzParams:
    """Couplings of the staggered XXZ chain: hopping J, Ising V, field W."""

    J: float = 1.0
    V: float = 0.0
    W: float = 1.0

    def __post_init__(self):
        for name in ("J", "V", "W"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass
class HamiltonianOperator:
    """Hermitian sector operator with optional sparse form and metadata."""

    basis: SubspaceBasis
    dense: np.ndarray
    sparse: scipy.sparse.csr_matrix | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        dev = hermiticity_defect(self.dense)
        if dev > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian (defect {dev:.3e})")

    def matvec(self, v):
        if self.sparse is not None:
            return self.sparse @ v
        return self.dense @ v


def hermiticity_defect(m):
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def build_xxz(basis, params):
    """Staggered XXZ chain with periodic boundaries on the sector basis."""
    L = basis.L
    if L < 4:
        raise ValueError("build_xxz requires L >= 4 (PBC bonds degenerate at L=2)")
    signs = basis.signs
    bonds = [(j, j % L + 1) for j in range(1, L + 1)]

    diag = np.zeros(basis.dim)
    for j, jn in bonds:
        diag += (params.V / 4.0) * signs[:, j - 1] * signs[:, jn - 1]
    stagger = np.array([(-1.0) ** j for j in range(1, L + 1)])
    diag += (params.W / 2.0) * (signs @ stagger)

    rows = [np.arange(basis.dim)]
    cols = [np.arange(basis.dim)]
    vals = [diag.astype(np.complex128)]
    half_j = params.J / 2.0
    for j, jn in bonds:
        mask = (1 << (j - 1)) | (1 << (jn - 1))
        flipped = basis.configs ^ mask
        active = basis.popcount[basis.configs & mask] == 1
        rows.append(basis.rank_table[flipped[active]])
        cols.append(np.flatnonzero(active))
        vals.append(np.full(int(active.sum()), half_j, dtype=np.complex128))

    sparse = scipy.sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.dim, basis.dim),
    )
    return HamiltonianOperator(
        basis=basis,
        dense=sparse.toarray(),
        sparse=sparse,
        meta={"model": "xxz", "J": params.J, "V": params.V, "W": params.W},
    )


# SYK ---------------------------------------------------------------------


def site_pairs(L):
    """Ordered (i, j) site pairs with i < j, lexicographic."""
    return [(i, j) for i in range(1, L + 1) for j in range(i + 1, L + 1)]


def pair_index(L, i, j):
    if not (1 <= i < j <= L):
        raise ValueError(f"need 1 <= i < j <= L, got ({i}, {j})")
    return (i - 1) * L - (i - 1) * i // 2 + (j - i - 1)


@dataclass
class SykCouplings:
    """Canonical complex couplings of the two-body random model.

    `values` holds one entry per canonical quadruple (i, j, k, l) with
    i < j, k < l and pair_index(i, j) >= pair_index(k, l); the rest of the
    tensor follows from antisymmetry in each pair and hermiticity.
    """

    L: int
    J: float
    seed: int
    values: dict

    def coupling(self, i, j, k, l):
        """Full tensor element for arbitrary site indices."""
        for s in (i, j, k, l):
            if not 1 <= s <= self.L:
                raise ValueError(f"site index {s} out of range")
        if i == j or k == l:
            return 0.0 + 0.0j
        sign = 1.0
        if i > j:
            i, j = j, i
            sign = -sign
        if k > l:
            k, l = l, k
            sign = -sign
        if pair_index(self.L, i, j) >= pair_index(self.L, k, l):
            return sign * self.values[(i, j, k, l)]
        return sign * np.conj(self.values[(k, l, i, j)])

    def pair_matrix(self):
        """Dense (n_pairs, n_pairs) matrix J_{ij,kl} over i<j, k<l pairs."""
        n = len(site_pairs(self.L))
        m = np.zeros((n, n), dtype=np.complex128)
        for (i, j, k, l), v in self.values.items():
            a = pair_index(self.L, i, j)
            b = pair_index(self.L, k, l)
            m[a, b] = v
            m[b, a] = np.conj(v)
        return m


def sample_syk_couplings(L, J, seed):
    """Draw the canonical coupling entries.

    Off-diagonal pair entries get independent real and imaginary parts of
    variance J^2/2 each; equal-pair entries are real with variance J^2, so
    every entry has mean square modulus J^2.
    """
    if L < 4 or L % 2:
        raise ValueError("sample_syk_couplings requires even L >= 4")
    if J <= 0:
        raise ValueError("coupling scale J must be positive")
    rng = np.random.default_rng(seed)
    pairs = site_pairs(L)
    values = {}
    scale = J / math.sqrt(2.0)
    for b, (k, l) in enumerate(pairs):
        for a, (i, j) in enumerate(pairs):
            if a < b:
                continue
            if a == b:
                values[(i, j, k, l)] = complex(rng.normal(0.0, J))
            else:
                re, im = rng.normal(0.0, scale, size=2)
                values[(i, j, k, l)] = complex(re, im)
    return SykCouplings(L=L, J=J, seed=seed, values=values)


def build_syk(basis, couplings):
    """Sector matrix of the random two-body model.

    The sum over all ordered index pairs reduces to four times the sum over
    i<j, k<l because the string-dressed raising/lowering operators
    anticommute; the overall L^-3/2 keeps the bandwidth of order L.
    """
    if couplings.L != basis.L:
        raise ValueError(
            f"couplings are for L={couplings.L}, basis has L={basis.L}"
        )
    L = basis.L
    pairs = site_pairs(L)
    pair_a = np.array([p[0] for p in pairs], dtype=np.int64)
    pair_b = np.array([p[1] for p in pairs], dtype=np.int64)
    jmat = couplings.pair_matrix() * (4.0 / L**1.5)
    dense = kernels.syk_sector_matrix(
        basis.configs, basis.rank_table, basis.popcount, pair_a, pair_b, jmat
    )
    return HamiltonianOperator(
        basis=basis,
        dense=dense,
        meta={"model": "syk", "J": couplings.J, "seed": couplings.seed},
    )


def couplings_to_json(couplings, path):
    """Write canonical entries as a JSON list of (i, j, k, l, re, im)."""
    entries = [
        [i, j, k, l, v.real, v.imag]
        for (i, j, k, l), v in sorted(couplings.values.items())
    ]
    payload = {
        "L": couplings.L,
        "J": couplings.J,
        "seed": couplings.seed,
        "entries": entries,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def couplings_from_json(path):
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    values = {
        (i, j, k, l): complex(re, im)
        for i, j, k, l, re, im in payload["entries"]
    }
    return SykCouplings(
        L=payload["L"], J=payload["J"], seed=payload["seed"], values=values
    )
