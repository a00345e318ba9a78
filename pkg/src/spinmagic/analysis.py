"""Steady-state averaging and the two fit families used downstream.

The gamma dependence of the steady entropy is fitted with
f(g) = amplitude / (1 + (g / gamma0)^exponent), a generalized Lorentzian.
Fitting runs a damped Gauss-Newton (Levenberg-Marquardt) loop on the
logarithms of the three parameters, which keeps them positive; the
covariance is mapped back to the original parameters at the optimum.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

MAX_FIT_ITERATIONS = 200
GRADIENT_TOL = 1e-10


@dataclass
class SweepPoint:
    gamma: float
    L: int
    mean_sre: float
    stderr: float
    n_traj: int
    window: tuple
    stationary: bool = True


@dataclass
class FitResult:
    amplitude: float
    gamma0: float
    exponent: float
    cov: np.ndarray
    residual_rms: float
    converged: bool
    cost_trace: list = None

    @property
    def amplitude_err(self):
        return math.sqrt(max(self.cov[0, 0], 0.0))

    @property
    def gamma0_err(self):
        return math.sqrt(max(self.cov[1, 1], 0.0))

    @property
    def exponent_err(self):
        return math.sqrt(max(self.cov[2, 2], 0.0))


@dataclass
class LinearFit:
    slope: float
    intercept: float
    slope_stderr: float
    intercept_stderr: float = 0.0


def window_mean(record, t0, t1):
    mask = (record.times >= t0) & (record.times <= t1)
    if not np.any(mask):
        raise ValueError(f"no samples in window [{t0}, {t1}]")
    return float(np.mean(record.sre[mask])), mask


def steady_average(records, t0, t1, *, gamma=float("nan"), L=0):
    """Time average per trajectory, then mean and stderr over trajectories.

    The error bar is the root-mean-square deviation across trajectories
    divided by sqrt(N_r).  A first-half/second-half disagreement beyond two
    standard errors flags the window as non-stationary.
    """
    if not records:
        raise ValueError("need at least one trajectory record")
    if not t1 > t0:
        raise ValueError("need t1 > t0")
    means = []
    first_half = []
    second_half = []
    mid = 0.5 * (t0 + t1)
    for rec in records:
        m, mask = window_mean(rec, t0, t1)
        means.append(m)
        half = rec.times <= mid
        if np.any(mask & half):
            first_half.append(float(np.mean(rec.sre[mask & half])))
        if np.any(mask & ~half):
            second_half.append(float(np.mean(rec.sre[mask & ~half])))
    means = np.asarray(means)
    n = len(means)
    mean = float(np.mean(means))
    stderr = float(np.sqrt(np.mean((means - mean) ** 2)) / math.sqrt(n))

    stationary = True
    if first_half and second_half:
        gap = abs(np.mean(first_half) - np.mean(second_half))
        if stderr > 0 and gap > 2.0 * stderr:
            stationary = False
            warnings.warn(
                f"window [{t0}, {t1}] looks non-stationary: "
                f"half-window means differ by {gap:.3g} > 2 stderr",
                stacklevel=2,
            )
    return SweepPoint(
        gamma=gamma,
        L=L,
        mean_sre=mean,
        stderr=stderr,
        n_traj=n,
        window=(t0, t1),
        stationary=stationary,
    )


def lorentzian(g, amplitude, gamma0, exponent):
    return amplitude / (1.0 + (g / gamma0) ** exponent)


def _residuals_jacobian(theta, g, y, sigma):
    # theta = log(amplitude, gamma0, exponent)
    a, g0, b = np.exp(theta)
    u = (g / g0) ** b
    denom = 1.0 + u
    f = a / denom
    r = (f - y) / sigma
    d_a = f
    d_g0 = a * b * u / denom**2
    d_b = -a * u * b * np.log(g / g0) / denom**2
    jac = np.column_stack([d_a / sigma, d_g0 / sigma, d_b / sigma])
    return r, jac


def fit_generalized_lorentzian(points):
    """Weighted fit of (gamma, mean, stderr) triples to the generalized
    Lorentzian; never raises on non-convergence, reports it instead."""
    pts = sorted((float(g), float(m), float(s)) for g, m, s in points)
    if len(pts) < 4:
        raise ValueError("need at least 4 points")
    g = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    sigma = np.array([p[2] for p in pts])
    if np.any(g <= 0):
        raise ValueError("gamma values must be positive")
    if g[-1] / g[0] < 10.0:
        raise ValueError("points must span at least one decade in gamma")
    if np.any(sigma <= 0):
        raise ValueError("stderr weights must be positive")

    theta = np.log(_initial_guess(g, y))
    r, jac = _residuals_jacobian(theta, g, y, sigma)
    cost = float(r @ r)
    trace = [cost]
    lam = 1e-3
    converged = False
    for _ in range(MAX_FIT_ITERATIONS):
        grad = jac.T @ r
        if np.max(np.abs(grad)) < GRADIENT_TOL:
            converged = True
            break
        jtj = jac.T @ jac
        step_ok = False
        for _ in range(50):
            try:
                delta = np.linalg.solve(
                    jtj + lam * np.diag(np.diag(jtj)), -grad
                )
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = theta + delta
            r_new, jac_new = _residuals_jacobian(trial, g, y, sigma)
            cost_new = float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new <= cost:
                accepted_drop = cost - cost_new
                theta, r, jac, cost = trial, r_new, jac_new, cost_new
                trace.append(cost)
                lam = max(lam / 3.0, 1e-12)
                step_ok = True
                break
            lam *= 10.0
        if not step_ok:
            break
        if accepted_drop < 1e-14 * max(cost, 1.0):
            converged = True
            break

    a, g0, b = np.exp(theta)
    jtj = jac.T @ jac
    try:
        cov_log = np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        cov_log = np.full((3, 3), np.nan)
    scale = np.diag([a, g0, b])
    cov = scale @ cov_log @ scale
    return FitResult(
        amplitude=float(a),
        gamma0=float(g0),
        exponent=float(b),
        cov=cov,
        residual_rms=float(np.sqrt(np.mean(r**2))),
        converged=bool(converged),
        cost_trace=trace,
    )


def _initial_guess(g, y):
    a0 = max(y[0], 1e-12)
    half = a0 / 2.0
    g0 = g[-1]
    for i in range(1, len(g)):
        if y[i] < half <= y[i - 1]:
            # log-interpolation between the bracketing points
            frac = (half - y[i - 1]) / (y[i] - y[i - 1])
            g0 = math.exp(
                math.log(g[i - 1]) + frac * (math.log(g[i]) - math.log(g[i - 1]))
            )
            break
    else:
        if y[-1] < half:
            g0 = g[-1]
        else:
            g0 = math.sqrt(g[0] * g[-1])
    return np.array([a0, g0, 2.0])


def fit_linear(points):
    """Weighted least-squares line through (x, mean, stderr) triples."""
    pts = [(float(x), float(m), float(s)) for x, m, s in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    s = np.array([p[2] for p in pts])
    if np.allclose(x, x[0]):
        raise ValueError("degenerate abscissae")
    weighted = bool(np.all(s > 0))
    w = s if weighted else np.ones_like(s)
    a = np.column_stack([x / w, np.ones_like(x) / w])
    b = y / w
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    cov = np.linalg.inv(a.T @ a)
    if not weighted:
        # no error bars supplied: scale the covariance by the residual
        # variance so an exact line reports zero uncertainty
        resid = b - a @ coef
        cov = cov * float(resid @ resid) / max(len(x) - 2, 1)
    return LinearFit(
        slope=float(coef[0]),
        intercept=float(coef[1]),
        slope_stderr=float(np.sqrt(max(cov[0, 0], 0.0))),
        intercept_stderr=float(np.sqrt(max(cov[1, 1], 0.0))),
    )
