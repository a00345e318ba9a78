"""Application of exp(-i H dt) to sector states.

Small sectors precompute the full spectral decomposition once and reuse it
for every step; a cached dense step matrix turns each step into a single
matrix-vector product when the time step is fixed.  Larger sectors use a
Lanczos projection per application (the matrix is Hermitian, so the
three-term recurrence applies), with the standard posterior error estimate
and step halving on the rare occasions it is too large.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .hilbert import StateVector
from .hamiltonian import hermiticity_defect

EIG_MODE_MAX_DIM = 1000
DEFAULT_KRYLOV_DIM = 30
DEFAULT_KRYLOV_TOL = 1e-12


@dataclass
class Propagator:
    mode: str
    basis: object
    evals: np.ndarray | None = None
    evecs: np.ndarray | None = None
    op: object = None
    krylov_dim: int = DEFAULT_KRYLOV_DIM
    tol: float = DEFAULT_KRYLOV_TOL
    _step_cache: tuple | None = field(default=None, repr=False)

    def step_matrix(self, dt):
        """Dense exp(-i H dt), cached for repeated steps (eig mode only)."""
        if self.mode != "eig":
            raise ValueError("step_matrix is only available in eig mode")
        if self._step_cache is None or self._step_cache[0] != dt:
            phases = np.exp(-1j * self.evals * dt)
            u = (self.evecs * phases) @ self.evecs.conj().T
            self._step_cache = (dt, u)
        return self._step_cache[1]


def make_propagator(H, mode=None, krylov_dim=DEFAULT_KRYLOV_DIM, tol=DEFAULT_KRYLOV_TOL):
    """Prepare a propagator for H; `mode` is "eig", "krylov", or None to
    pick eig below EIG_MODE_MAX_DIM states and krylov above."""
    defect = hermiticity_defect(H.dense)
    if defect > 1e-12:
        raise ValueError(f"non-Hermitian input (defect {defect:.3e})")
    if mode is None:
        mode = "eig" if H.basis.dim <= EIG_MODE_MAX_DIM else "krylov"
    if mode == "eig":
        evals, evecs = np.linalg.eigh(H.dense)
        return Propagator(mode="eig", basis=H.basis, evals=evals, evecs=evecs, op=H)
    if mode == "krylov":
        return Propagator(
            mode="krylov", basis=H.basis, op=H, krylov_dim=krylov_dim, tol=tol
        )
    raise ValueError(f"unknown propagator mode {mode!r}")


def apply_unitary(prop, psi, dt):
    """exp(-i H dt) |psi>, norm preserving."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if prop.mode == "eig":
        if prop._step_cache is not None and prop._step_cache[0] == dt:
            out = prop._step_cache[1] @ psi.amps
        else:
            coeff = prop.evecs.conj().T @ psi.amps
            out = prop.evecs @ (np.exp(-1j * prop.evals * dt) * coeff)
        return StateVector(psi.basis, out)
    return StateVector(
        psi.basis,
        _expm_lanczos(prop.op.matvec, psi.amps, dt, prop.krylov_dim, prop.tol),
    )


def _expm_lanczos(matvec, v, dt, m, tol, _depth=0):
    norm_v = np.linalg.norm(v)
    if norm_v == 0.0:
        return v.copy()
    n = v.shape[0]
    m_eff = min(m, n)
    V = np.empty((m_eff, n), dtype=np.complex128)
    alphas = np.empty(m_eff)
    betas = np.empty(m_eff)  # betas[j] couples vector j to j+1
    V[0] = v / norm_v
    k = m_eff
    beta_next = 0.0
    for j in range(m_eff):
        w = matvec(V[j])
        alphas[j] = np.real(np.vdot(V[j], w))
        w = w - alphas[j] * V[j]
        if j > 0:
            w = w - betas[j - 1] * V[j - 1]
        # full reorthogonalization; m is small and this keeps V numerically
        # orthonormal, which is what preserves the norm of the result
        w = w - V[: j + 1].T @ (V[: j + 1].conj() @ w)
        beta = np.linalg.norm(w)
        if j + 1 == m_eff:
            beta_next = beta
            break
        if beta < 1e-14 * max(1.0, abs(alphas[j])):
            k = j + 1
            beta_next = 0.0
            break
        betas[j] = beta
        V[j + 1] = w / beta

    evals, evecs = scipy.linalg.eigh_tridiagonal(alphas[:k], betas[: k - 1])
    small = evecs @ (np.exp(-1j * dt * evals) * evecs[0].conj())
    err = beta_next * abs(small[-1])
    if err > tol and _depth < 40:
        half = _expm_lanczos(matvec, v, dt / 2.0, m, tol, _depth + 1)
        return _expm_lanczos(matvec, half, dt / 2.0, m, tol, _depth + 1)
    return norm_v * (V[:k].T @ small)
