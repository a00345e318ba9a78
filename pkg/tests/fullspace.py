"""Brute-force full 2^L-space constructions used as independent oracles.

Everything here works with explicit kron-built matrices and ignores the
package's bit-mask machinery on purpose.
"""

import numpy as np

SIGMA = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}
SPLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |up><down| in (up, down)
SMINUS = SPLUS.T.conj()


def site_op(L, j, mat_updown):
    """Full-space operator acting with `mat_updown` on site j (1-based).

    `mat_updown` is written in the (up, down) basis; storage order along a
    bit is (down, up), hence the double flip.
    """
    m = np.asarray(mat_updown, dtype=complex)[::-1, ::-1]
    return np.kron(np.eye(1 << (L - j)), np.kron(m, np.eye(1 << (j - 1))))


def string_op(L, j):
    """prod_{m<j} sigma^z_m as a full-space matrix."""
    s = np.eye(1 << L, dtype=complex)
    for m in range(1, j):
        s = s @ site_op(L, m, SIGMA[3])
    return s


def xxz_full(L, J, V, W):
    H = np.zeros((1 << L, 1 << L), dtype=complex)
    for j in range(1, L + 1):
        jn = j % L + 1
        H += (J / 2) * (
            site_op(L, j, SPLUS) @ site_op(L, jn, SMINUS)
            + site_op(L, j, SMINUS) @ site_op(L, jn, SPLUS)
        )
        H += (V / 4) * site_op(L, j, SIGMA[3]) @ site_op(L, jn, SIGMA[3])
        H += (W / 2) * (-1) ** j * site_op(L, j, SIGMA[3])
    return H


def syk_full(L, couplings):
    """All L^4 string-dressed terms built as explicit matrix products."""
    dim = 1 << L
    H = np.zeros((dim, dim), dtype=complex)
    cre = [string_op(L, j) @ site_op(L, j, SPLUS) for j in range(1, L + 1)]
    ann = [string_op(L, j) @ site_op(L, j, SMINUS) for j in range(1, L + 1)]
    for i in range(1, L + 1):
        for j in range(1, L + 1):
            for k in range(1, L + 1):
                for l in range(1, L + 1):
                    c = couplings.coupling(i, j, k, l)
                    if c != 0:
                        H += c * (cre[i - 1] @ cre[j - 1] @ ann[k - 1] @ ann[l - 1])
    return H / L**1.5


def pauli_string_matrix(codes):
    """Dense matrix of a Pauli string from per-site codes (site 1 first)."""
    L = len(codes)
    m = np.eye(1 << L, dtype=complex)
    for j, code in enumerate(codes, start=1):
        if code:
            m = m @ site_op(L, j, SIGMA[code])
    return m


def embed(psi):
    """Sector state -> full-space vector."""
    full = np.zeros(1 << psi.basis.L, dtype=complex)
    full[psi.basis.configs] = psi.amps
    return full


def sector_block(M, basis):
    """Restriction of a full-space matrix to the sector configurations."""
    return M[np.ix_(basis.configs, basis.configs)]
