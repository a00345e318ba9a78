"""Numba implementations of the Pauli-moment and SYK-builder kernels."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _moment_partials(amps, configs, rank_table, pop, L):
    n_full = 1 << L
    ncfg = configs.shape[0]
    nflip = 1 << (L - 1)  # even-popcount flip masks

    tre = np.empty(n_full, dtype=np.float64)
    tim = np.empty(n_full, dtype=np.float64)
    part4 = np.zeros(nflip, dtype=np.float64)
    part2 = np.zeros(nflip, dtype=np.float64)
    max_resid = 0.0

    fi = 0
    for f in range(n_full):
        if pop[f] & 1:
            continue
        for i in range(n_full):
            tre[i] = 0.0
            tim[i] = 0.0
        hit = False
        for idx in range(ncfg):
            c = configs[idx]
            rp = rank_table[c ^ f]
            if rp >= 0:
                w = np.conj(amps[idx]) * amps[rp]
                tre[c] = w.real
                tim[c] = w.imag
                hit = True
        if not hit:
            fi += 1
            continue
        # In-place Walsh-Hadamard transform of both components:
        # after this, tre[y] + i*tim[y] = sum_c (-1)^{popcount(c & y)} w_c.
        h = 1
        while h < n_full:
            step = h << 1
            for start in range(0, n_full, step):
                for a in range(start, start + h):
                    b = a + h
                    xr = tre[a]
                    yr = tre[b]
                    tre[a] = xr + yr
                    tre[b] = xr - yr
                    xi = tim[a]
                    yi = tim[b]
                    tim[a] = xi + yi
                    tim[b] = xi - yi
            h = step
        # A_P is the real part of i^{n_y} (-1)^{n_z} T(y); depending on the
        # parity of n_y = popcount(f & y) that is +-Re T or +-Im T, and the
        # sign is irrelevant for even moments.  Kahan-compensated sums.
        s4 = 0.0
        c4 = 0.0
        s2 = 0.0
        c2 = 0.0
        for y in range(n_full):
            if pop[y & f] & 1:
                a = tim[y]
                resid = abs(tre[y])
            else:
                a = tre[y]
                resid = abs(tim[y])
            if resid > max_resid:
                max_resid = resid
            a2 = a * a
            t = s2 + a2
            if abs(s2) >= abs(a2):
                c2 += (s2 - t) + a2
            else:
                c2 += (a2 - t) + s2
            s2 = t
            a4 = a2 * a2
            t = s4 + a4
            if abs(s4) >= abs(a4):
                c4 += (s4 - t) + a4
            else:
                c4 += (a4 - t) + s4
            s4 = t
        part4[fi] = s4 + c4
        part2[fi] = s2 + c2
        fi += 1
    return part4, part2, max_resid


def pauli_moment_sums(amps, configs, rank_table, pop, L):
    """Sums of A_P^4 and A_P^2 over all Pauli strings, plus the largest
    spurious component seen in any expectation (integrity diagnostic)."""
    part4, part2, max_resid = _moment_partials(amps, configs, rank_table, pop, L)
    return float(np.sum(part4)), float(np.sum(part2)), float(max_resid)


@njit(cache=True, nogil=True)
def syk_sector_matrix(configs, rank_table, pop, pair_a, pair_b, jmat):
    """Sector matrix of sum_{i<j,k<l} jmat[ij,kl] c+_i c+_j c_k c_l with
    Jordan-Wigner strings evaluated on the intermediate configurations.

    `jmat` carries all prefactors (coupling reshuffling factor and L^-3/2).
    Sites in pair_a/pair_b are 1-based with pair_a < pair_b.
    """
    ncfg = configs.shape[0]
    npair = pair_a.shape[0]
    H = np.zeros((ncfg, ncfg), dtype=np.complex128)
    for idx in range(ncfg):
        c0 = configs[idx]
        for pkl in range(npair):
            k = pair_a[pkl]
            l = pair_b[pkl]
            bl = 1 << (l - 1)
            if not (c0 & bl):
                continue
            s = 1
            if ((l - 1 - pop[c0 & (bl - 1)]) & 1) != 0:
                s = -1
            c1 = c0 & ~bl
            bk = 1 << (k - 1)
            if not (c1 & bk):
                continue
            if ((k - 1 - pop[c1 & (bk - 1)]) & 1) != 0:
                s = -s
            c2 = c1 & ~bk
            for pij in range(npair):
                i = pair_a[pij]
                j = pair_b[pij]
                bj = 1 << (j - 1)
                if c2 & bj:
                    continue
                s2 = s
                if ((j - 1 - pop[c2 & (bj - 1)]) & 1) != 0:
                    s2 = -s2
                c3 = c2 | bj
                bi = 1 << (i - 1)
                if c3 & bi:
                    continue
                if ((i - 1 - pop[c3 & (bi - 1)]) & 1) != 0:
                    s2 = -s2
                c4 = c3 | bi
                H[rank_table[c4], idx] += jmat[pij, pkl] * s2
    return H
