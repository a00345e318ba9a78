"""Quantum-state-diffusion trajectories and the Lindblad reference integrator.

One monitored step applies the unitary factor exp(-i H dt), then multiplies
each amplitude by exp(sum_l s_l [dxi_l + 2 gamma dt <sz_l>]) and renormalizes.
The sz expectations in the exponent are taken on the pre-step state.  Noise
increments are Gaussian with variance gamma*dt, independent per site and per
step.  Averaging trajectories recovers the dephasing Lindblad equation, which
the RK4 integrator here solves directly for small systems as a cross-check.
"""

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .evolution import apply_unitary, make_propagator
from .hilbert import StateVector, neel_state

NORM_TOL = 1e-12


class IntegrationError(RuntimeError):
    """The master-equation integration left its accuracy budget."""


@dataclass(frozen=True)
class MonitoringParams:
    gamma: float
    dt: float = 0.01
    t_max: float = 20.0
    sre_stride: int = 10
    burn_in: float = 10.0
    record_sre: bool = True
    record_sz: bool = False

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not self.burn_in < self.t_max:
            raise ValueError("burn_in must be smaller than t_max")
        if self.sre_stride < 1:
            raise ValueError("sre_stride must be >= 1")

    @property
    def n_steps(self):
        return int(round(self.t_max / self.dt))


@dataclass(frozen=True)
class NoiseSample:
    """Per-site Gaussian increments for one step, variance gamma*dt."""

    xi: np.ndarray


def draw_noise(rng, gamma, dt, L):
    return NoiseSample(xi=rng.normal(0.0, math.sqrt(gamma * dt), size=L))


@dataclass
class TrajectoryRecord:
    seed: object
    times: np.ndarray
    sre: np.ndarray
    sz: np.ndarray | None = None
    norm_drift: float = 0.0


def sigma_z_expectations(psi):
    """<sigma^z_l> for l = 1..L; the components sum to zero in this sector."""
    w = np.abs(psi.amps) ** 2
    return w @ psi.basis.signs


def qsd_step(psi, prop, params, noise):
    """One Trotterized monitored step; returns a normalized state."""
    sz = sigma_z_expectations(psi)
    out = apply_unitary(prop, psi, params.dt)
    g = noise.xi + 2.0 * params.gamma * params.dt * sz
    expo = psi.basis.signs @ g
    # common offset drops out after normalization; guards against overflow
    out.amps *= np.exp(expo - expo.max())
    n = np.linalg.norm(out.amps)
    if n == 0.0 or not np.isfinite(n):
        raise RuntimeError("monitored step produced a non-normalizable state")
    out.amps /= n
    return out


def run_trajectory(H, basis, params, seed):
    """Full monitored run from the Neel state; deterministic per seed."""
    if H.basis.L != basis.L or H.basis.dim != basis.dim:
        raise ValueError("Hamiltonian and basis disagree")
    prop = make_propagator(H)
    if prop.mode == "eig":
        prop.step_matrix(params.dt)
    return _run_with_prop(prop, params, seed)


def _run_with_prop(prop, params, seed):
    rng = np.random.default_rng(seed)
    basis = prop.basis
    psi = neel_state(basis)
    # local import: magic depends on kernels only, but keep module load light
    from .magic import sre as _sre

    times = []
    sre_vals = []
    sz_vals = []
    drift = 0.0

    def sample(step, state):
        times.append(step * params.dt)
        if params.record_sre:
            sre_vals.append(_sre(state))
        if params.record_sz:
            sz_vals.append(sigma_z_expectations(state))

    sample(0, psi)
    for step in range(1, params.n_steps + 1):
        noise = draw_noise(rng, params.gamma, params.dt, basis.L)
        psi = qsd_step(psi, prop, params, noise)
        drift = max(drift, abs(np.linalg.norm(psi.amps) - 1.0))
        if step % params.sre_stride == 0:
            sample(step, psi)

    return TrajectoryRecord(
        seed=seed,
        times=np.asarray(times),
        sre=np.asarray(sre_vals) if params.record_sre else np.empty(0),
        sz=np.asarray(sz_vals) if params.record_sz else None,
        norm_drift=drift,
    )


def trajectory_seed(master_seed, index):
    """Splittable per-trajectory seed; independent of execution order."""
    return np.random.SeedSequence(master_seed, spawn_key=(index,))


def run_ensemble(H, params, n_traj, master_seed, workers=None):
    """N_r independent trajectories sharing one immutable propagator.

    Results are collected in trajectory order, so aggregates do not depend
    on the worker count.
    """
    prop = make_propagator(H)
    if prop.mode == "eig":
        prop.step_matrix(params.dt)
    seeds = [trajectory_seed(master_seed, i) for i in range(n_traj)]
    if workers is not None and workers <= 1:
        return [_run_with_prop(prop, params, s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_with_prop, prop, params, s) for s in seeds]
        return [f.result() for f in futures]


def write_trajectory_csv(record, path, params=None, meta=None):
    """CSV columns t, sre[, sz_1..sz_L]; JSON sidecar with seed and params."""
    L = record.sz.shape[1] if record.sz is not None else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "sre"] + [f"sz_{l}" for l in range(1, L + 1)])
        for i, t in enumerate(record.times):
            row = [f"{t:.17e}"]
            row.append(f"{record.sre[i]:.17e}" if record.sre.size else "nan")
            if record.sz is not None:
                row.extend(f"{v:.17e}" for v in record.sz[i])
            writer.writerow(row)
    sidecar = {
        "seed": _seed_repr(record.seed),
        "norm_drift": record.norm_drift,
        "params": _params_dict(params),
        "meta": meta or {},
    }
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2)


def _seed_repr(seed):
    if isinstance(seed, np.random.SeedSequence):
        return {"entropy": seed.entropy, "spawn_key": list(seed.spawn_key)}
    return seed


def _params_dict(params):
    if params is None:
        return None
    return {
        "gamma": params.gamma,
        "dt": params.dt,
        "t_max": params.t_max,
        "sre_stride": params.sre_stride,
        "burn_in": params.burn_in,
    }


# Lindblad reference ---------------------------------------------------------

LINDBLAD_MAX_SITES = 6


@dataclass
class DensityMatrix:
    basis: object
    rho: np.ndarray

    def validate(self, tol=1e-10):
        dev = float(np.max(np.abs(self.rho - self.rho.conj().T)))
        tr = complex(np.trace(self.rho))
        if dev > tol:
            raise ValueError(f"density matrix not Hermitian (defect {dev:.3e})")
        if abs(tr - 1.0) > tol:
            raise ValueError(f"density matrix trace {tr} != 1")
        evals = np.linalg.eigvalsh(self.rho)
        if evals.min() < -max(tol, 1e-10):
            raise ValueError(f"density matrix has negative weight {evals.min():.3e}")
        return self


def pure_density(psi):
    return DensityMatrix(psi.basis, np.outer(psi.amps, psi.amps.conj()))


def sz_from_density(dm):
    return np.real(np.diag(dm.rho)) @ dm.basis.signs


def lindblad_evolve(rho0, H, gamma, t_max, dt_rk, sample_stride=1):
    """RK4 integration of the dephasing master equation.

    The jump part is diagonal in this basis: entry (a, b) decays at rate
    gamma * (L - sum_j s_j(a) s_j(b)) = 2 gamma * (number of differing sites).
    Returns (times, list of DensityMatrix) sampled every `sample_stride`
    steps, starting at t=0.
    """
    basis = rho0.basis
    if basis.L > LINDBLAD_MAX_SITES:
        raise ValueError(f"lindblad_evolve supports L <= {LINDBLAD_MAX_SITES}")
    signs = basis.signs
    decay = gamma * (signs @ signs.T - basis.L)  # <= 0 elementwise
    h = H.dense

    def rhs(rho):
        return -1j * (h @ rho - rho @ h) + decay * rho

    n_steps = int(round(t_max / dt_rk))
    rho = rho0.rho.astype(np.complex128).copy()
    times = [0.0]
    out = [DensityMatrix(basis, rho.copy())]
    for step in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt_rk * k1)
        k3 = rhs(rho + 0.5 * dt_rk * k2)
        k4 = rhs(rho + dt_rk * k3)
        rho = rho + (dt_rk / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
        if drift > 1e-6:
            raise IntegrationError(
                f"trace drift {drift:.3e} at t={step * dt_rk:.4g}; reduce dt_rk"
            )
        if step % sample_stride == 0:
            times.append(step * dt_rk)
            out.append(DensityMatrix(basis, rho.copy()))
    return np.asarray(times), out
