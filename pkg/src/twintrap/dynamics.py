"""Drift/diffusion matrices, stability, Lyapunov solve and covariance evolution.

State ordering throughout: u = (x1, p1, x2, p2, X1, Y1, X2, Y2), mechanical
quadratures first, then the two control-mode quadratures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from .model import DerivedParams
from .meanfield import MeanTrajectory, WorkingPoint

SQRT2 = np.sqrt(2.0)

#: Relative eigenvalue magnitude below which stability is ruled marginal.
MARGINAL_TOL = 1e-8

#: Relative residual bound enforced on every steady Lyapunov solve.
LYAPUNOV_RTOL = 1e-10


class UnstableSystemError(RuntimeError):
    """Requested a steady state of a drift matrix with non-negative spectrum."""


class BlowupError(RuntimeError):
    """Covariance norm exploded during integration."""

    def __init__(self, t: float):
        super().__init__(f"covariance blow-up at t = {t:.6e}")
        self.t = t


def build_drift(wp: WorkingPoint, params: DerivedParams) -> np.ndarray:
    """8x8 drift matrix of the linearized fluctuation equations."""
    a = np.zeros((8, 8))
    g = wp.coupling  # (i, j) complex
    kappa = params.kappa_control()
    for j in range(2):
        xr, pr = 2 * j, 2 * j + 1
        a[xr, pr] = params.omega_mech[j]
        a[pr, xr] = -wp.omega_shifted[j]
        a[pr, pr] = -params.gamma[j]
        for i in range(2):
            xc, yc = 4 + 2 * i, 5 + 2 * i
            a[pr, xc] = -SQRT2 * g[i, j].real
            a[pr, yc] = -SQRT2 * g[i, j].imag
            a[xc, xr] = SQRT2 * g[i, j].imag
            a[yc, xr] = -SQRT2 * g[i, j].real
    for i in range(2):
        xc, yc = 4 + 2 * i, 5 + 2 * i
        a[xc, xc] = -kappa[i]
        a[xc, yc] = wp.detuning[i]
        a[yc, xc] = -wp.detuning[i]
        a[yc, yc] = -kappa[i]
    return a


def build_diffusion(params: DerivedParams, high_t: bool = False) -> np.ndarray:
    """Diagonal diffusion matrix of the noise correlations.

    Default uses the exact (2 n_th + 1)(gamma + Gamma) mechanical entries;
    ``high_t`` selects the classical-limit 2 kB T / (hbar Omega) prefactor
    instead (they differ below the percent level at the shipped scenarios).
    """
    if high_t:
        # 2 kB T / (hbar Omega), recovered from the occupancy via
        # kB T / (hbar Omega) = 1 / ln(1 + 1/n_th).
        mech = 2.0 / np.log1p(1.0 / params.n_thermal)
    else:
        mech = 2 * params.n_thermal + 1
    heating = params.gamma + params.recoil
    kappa = params.kappa_control()
    return np.diag([0.0, mech[0] * heating[0], 0.0, mech[1] * heating[1],
                    kappa[0], kappa[0], kappa[1], kappa[1]])


def _characteristic_polynomial(a: np.ndarray) -> np.ndarray:
    """Monic characteristic polynomial coefficients via Faddeev-LeVerrier.

    Avoids any eigenvalue computation so the Routh-Hurwitz verdict stays
    independent of the spectral oracle used in tests.
    """
    n = a.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


def routh_hurwitz_stable(a: np.ndarray) -> bool:
    """True iff all characteristic roots lie strictly in the left half-plane.

    Builds the Routh table of the characteristic polynomial; a zero pivot
    (marginal case) counts as not stable.
    """
    coeffs = _characteristic_polynomial(np.asarray(a, dtype=float))
    n = len(coeffs) - 1
    if any(c <= 0 for c in coeffs):
        # Necessary condition: all coefficients of a Hurwitz polynomial
        # (with positive leading coefficient) are positive.
        return False
    width = (n + 2) // 2
    rows = np.zeros((n + 1, width + 1))
    rows[0, :len(coeffs[0::2])] = coeffs[0::2]
    rows[1, :len(coeffs[1::2])] = coeffs[1::2]
    scale = np.max(np.abs(coeffs))
    for r in range(2, n + 1):
        pivot = rows[r - 1, 0]
        if abs(pivot) <= 1e-300 * scale:
            return False
        for c in range(width):
            rows[r, c] = (pivot * rows[r - 2, c + 1]
                          - rows[r - 2, 0] * rows[r - 1, c + 1]) / pivot
        if rows[r, 0] <= 0:
            return False
    return True


@dataclass(frozen=True)
class StabilityReport:
    verdict: str            # "stable" | "unstable" | "marginal"
    margin: float           # -max Re(eigenvalue)

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"


def stability_check(a: np.ndarray) -> StabilityReport:
    """Routh-Hurwitz verdict plus the spectral abscissa margin."""
    a = np.asarray(a, dtype=float)
    max_re = float(np.max(np.linalg.eigvals(a).real))
    norm = float(np.linalg.norm(a, 2))
    if abs(max_re) <= MARGINAL_TOL * max(norm, 1.0):
        return StabilityReport("marginal", -max_re)
    verdict = "stable" if routh_hurwitz_stable(a) else "unstable"
    return StabilityReport(verdict, -max_re)


def lyapunov_steady(a: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Steady covariance from A V + V A^T + D = 0.

    Raises ``UnstableSystemError`` when the drift admits no steady state and
    enforces the relative residual bound on the returned solution.
    """
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    report = stability_check(a)
    if not report.stable:
        raise UnstableSystemError(
            f"no steady state: drift is {report.verdict} (margin {report.margin:.3e})")
    v = solve_continuous_lyapunov(a, -d)
    v = 0.5 * (v + v.T)
    residual = np.linalg.norm(a @ v + v @ a.T + d) / np.linalg.norm(d)
    if residual > LYAPUNOV_RTOL:
        raise RuntimeError(f"Lyapunov residual {residual:.3e} above bound")
    return v


@dataclass(frozen=True)
class CovTrajectory:
    """Covariance samples V(t_k) on a uniform stored grid."""

    t: np.ndarray            # (n,)
    v: np.ndarray            # (n, 8, 8)

    def __len__(self) -> int:
        return len(self.t)


def drift_samples(traj: MeanTrajectory, params: DerivedParams) -> np.ndarray:
    """Drift matrices at every mean-trajectory sample (vectorized assembly)."""
    n = len(traj)
    a = np.zeros((n, 8, 8))
    g = traj.coupling
    kappa = params.kappa_control()
    for j in range(2):
        xr, pr = 2 * j, 2 * j + 1
        a[:, xr, pr] = params.omega_mech[j]
        a[:, pr, xr] = -traj.omega_shifted[:, j]
        a[:, pr, pr] = -params.gamma[j]
        for i in range(2):
            xc, yc = 4 + 2 * i, 5 + 2 * i
            a[:, pr, xc] = -SQRT2 * g[:, i, j].real
            a[:, pr, yc] = -SQRT2 * g[:, i, j].imag
            a[:, xc, xr] = SQRT2 * g[:, i, j].imag
            a[:, yc, xr] = -SQRT2 * g[:, i, j].real
    for i in range(2):
        xc, yc = 4 + 2 * i, 5 + 2 * i
        a[:, xc, xc] = -kappa[i]
        a[:, xc, yc] = traj.detuning[:, i]
        a[:, yc, xc] = -traj.detuning[:, i]
        a[:, yc, yc] = -kappa[i]
    return a


def evolve_covariance(v0: np.ndarray, a_half: np.ndarray, d: np.ndarray,
                      dt: float, t0: float = 0.0,
                      store_stride: int = 1) -> CovTrajectory:
    """RK4 integration of V' = A(t) V + V A(t)^T + D.

    ``a_half`` holds drift matrices on the half-step grid: 2N + 1 samples at
    spacing dt/2 for N steps, so the RK4 stages see the exact drift without
    interpolation.  The covariance is re-symmetrized each step; blow-up past
    1e6 x the initial norm raises ``BlowupError``.
    """
    if a_half.ndim != 3 or a_half.shape[0] % 2 == 0:
        raise ValueError("a_half must hold an odd number of 8x8 samples")
    n_steps = (a_half.shape[0] - 1) // 2
    v = 0.5 * (np.asarray(v0, dtype=float) + np.asarray(v0, dtype=float).T)
    norm0 = np.linalg.norm(v)
    limit = 1e6 * max(norm0, 1.0)

    n_stored = n_steps // store_stride + 1
    out_t = np.empty(n_stored)
    out_v = np.empty((n_stored, 8, 8))
    out_t[0] = t0
    out_v[0] = v
    stored = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        a0 = a_half[2 * k]
        am = a_half[2 * k + 1]
        a1 = a_half[2 * k + 2]
        k1 = a0 @ v + v @ a0.T + d
        w = v + half * k1
        k2 = am @ w + w @ am.T + d
        w = v + half * k2
        k3 = am @ w + w @ am.T + d
        w = v + dt * k3
        k4 = a1 @ w + w @ a1.T + d
        v = v + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        v = 0.5 * (v + v.T)
        if not np.isfinite(v).all() or np.linalg.norm(v) > limit:
            raise BlowupError(t0 + (k + 1) * dt)
        if (k + 1) % store_stride == 0:
            out_t[stored] = t0 + (k + 1) * dt
            out_v[stored] = v
            stored += 1
    return CovTrajectory(t=out_t[:stored], v=out_v[:stored])


@dataclass(frozen=True)
class QuasiSteadyOrbit:
    """One drive period extracted from the tail of a covariance trajectory."""

    t: np.ndarray
    v: np.ndarray
    converged: bool
    period_change: float


def quasi_steady_orbit(traj: CovTrajectory, omega_d: float,
                       tol: float = 1e-3) -> QuasiSteadyOrbit:
    """Final-period samples, flagged converged when the period-to-period
    relative covariance change falls below ``tol``.

    For an unmodulated run (``omega_d`` = 0) the final sample is compared
    against the one a nominal period earlier.
    """
    dt_store = traj.t[1] - traj.t[0] if len(traj) > 1 else 0.0
    if omega_d > 0:
        period = 2 * np.pi / omega_d
    else:
        period = max(dt_store, (traj.t[-1] - traj.t[0]) / 10)
    n_per = max(1, int(round(period / dt_store))) if dt_store > 0 else 1
    if len(traj) < 2 * n_per + 1:
        return QuasiSteadyOrbit(traj.t, traj.v, False, np.inf)
    last = traj.v[-(n_per + 1):]
    prev = traj.v[-(2 * n_per + 1):-n_per]
    change = float(np.max(
        np.linalg.norm(last - prev, axis=(1, 2)) / np.linalg.norm(last, axis=(1, 2))))
    return QuasiSteadyOrbit(traj.t[-(n_per + 1):], last, change < tol, change)
