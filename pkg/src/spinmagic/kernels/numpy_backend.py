"""Pure-numpy implementations of the hot kernels (fallback backend)."""

import math

import numpy as np


def _fwht_inplace(a):
    # Unnormalized Walsh-Hadamard transform along the last axis (length 2^k).
    n = a.shape[-1]
    h = 1
    while h < n:
        b = a.reshape(-1, n // (2 * h), 2 * h)
        x = b[..., :h].copy()
        y = b[..., h:].copy()
        b[..., :h] = x + y
        b[..., h:] = x - y
        h *= 2
    return a


def pauli_moment_sums(amps, configs, rank_table, pop, L):
    """Sums of A_P^4 and A_P^2 over all Pauli strings, plus the largest
    spurious component seen in any expectation (integrity diagnostic)."""
    n_full = 1 << L
    full = np.zeros(n_full, dtype=np.complex128)
    full[configs] = amps
    words = np.arange(n_full, dtype=np.int64)
    conj_full = np.conj(full)

    part4 = []
    part2 = []
    max_resid = 0.0
    for f in range(0, n_full):
        if pop[f] & 1:
            continue
        w = conj_full * full[words ^ f]
        t = _fwht_inplace(w)
        odd = (pop[words & f] & 1).astype(bool)
        a = np.where(odd, t.imag, t.real)
        resid = np.where(odd, t.real, t.imag)
        r = float(np.max(np.abs(resid))) if resid.size else 0.0
        if r > max_resid:
            max_resid = r
        a2 = a * a
        part4.append(float(a2 @ a2))
        part2.append(float(np.sum(a2)))
    return math.fsum(part4), math.fsum(part2), max_resid


def _string_parity(words, pop, site):
    # Parity of prod_{m<site} s_m on each word: odd number of down spins
    # below `site` flips the sign.
    below = words & ((1 << (site - 1)) - 1)
    n_up = pop[below].astype(np.int64)
    return ((site - 1 - n_up) & 1).astype(np.int64)


def syk_sector_matrix(configs, rank_table, pop, pair_a, pair_b, jmat):
    """Sector matrix of sum_{i<j,k<l} jmat[ij,kl] c+_i c+_j c_k c_l with
    Jordan-Wigner strings evaluated on the intermediate configurations.

    `jmat` carries all prefactors (coupling reshuffling factor and L^-3/2).
    Sites in pair_a/pair_b are 1-based with pair_a < pair_b.
    """
    ncfg = configs.shape[0]
    npair = pair_a.shape[0]
    H = np.zeros((ncfg, ncfg), dtype=np.complex128)
    cols = np.arange(ncfg, dtype=np.int64)
    for pkl in range(npair):
        k = int(pair_a[pkl])
        l = int(pair_b[pkl])
        bk = 1 << (k - 1)
        bl = 1 << (l - 1)
        ok = (configs & bl).astype(bool)
        sgn = 1 - 2 * _string_parity(configs, pop, l)
        c1 = configs & ~bl
        ok &= (c1 & bk).astype(bool)
        sgn *= 1 - 2 * _string_parity(c1, pop, k)
        c2 = c1 & ~bk
        for pij in range(npair):
            i = int(pair_a[pij])
            j = int(pair_b[pij])
            bi = 1 << (i - 1)
            bj = 1 << (j - 1)
            ok2 = ok & ~(c2 & bj).astype(bool)
            sgn2 = sgn * (1 - 2 * _string_parity(c2, pop, j))
            c3 = c2 | bj
            ok2 &= ~(c3 & bi).astype(bool)
            sgn2 = sgn2 * (1 - 2 * _string_parity(c3, pop, i))
            c4 = c3 | bi
            if not np.any(ok2):
                continue
            rows = rank_table[c4[ok2]]
            np.add.at(H, (rows, cols[ok2]), jmat[pij, pkl] * sgn2[ok2])
    return H
