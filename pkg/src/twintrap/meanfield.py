"""Classical (coherent-part) dynamics and the working point it defines.

The linearized fluctuation dynamics is parameterized by the effective
detunings Delta_i, the effective couplings G_ij = <a_i>(Gl_ij + 2 Gq_ij <x_j>)
and the shifted trap frequencies Omega~_j.  This module solves the CW fixed
point and integrates the driven mean-field equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DerivedParams, DriveSpec


class ConvergenceError(RuntimeError):
    """Fixed point or integration failed to converge; carries the residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class WorkingPoint:
    """Classical means and effective parameters at one time instant."""

    t: float
    a: np.ndarray            # (2,) complex control-mode means
    x: np.ndarray            # (2,) mean positions, zero-point units
    p: np.ndarray            # (2,) mean momenta
    detuning: np.ndarray     # (2,) effective detunings Delta_i
    coupling: np.ndarray     # (2, 2) complex effective couplings G_ij
    omega_shifted: np.ndarray  # (2,) Omega~_j
    bare_detuning: np.ndarray  # (2,) the delta_i consistent with Delta_i


@dataclass(frozen=True)
class MeanTrajectory:
    """Densely sampled working points (arrays indexed by sample)."""

    t: np.ndarray
    a: np.ndarray            # (n, 2) complex
    x: np.ndarray            # (n, 2)
    p: np.ndarray            # (n, 2)
    detuning: np.ndarray     # (n, 2)
    coupling: np.ndarray     # (n, 2, 2) complex
    omega_shifted: np.ndarray  # (n, 2)
    bare_detuning: np.ndarray  # (2,)

    def __len__(self) -> int:
        return len(self.t)

    def point(self, idx: int) -> WorkingPoint:
        return WorkingPoint(
            t=self.t[idx], a=self.a[idx], x=self.x[idx], p=self.p[idx],
            detuning=self.detuning[idx], coupling=self.coupling[idx],
            omega_shifted=self.omega_shifted[idx], bare_detuning=self.bare_detuning,
        )


def _effective_quantities(params: DerivedParams, a: np.ndarray, x: np.ndarray,
                          bare_detuning: np.ndarray):
    """(Delta_i, G_ij, Omega~_j) from means; the three defining identities."""
    shift = params.g_lin @ x + params.g_quad @ x**2
    detuning = bare_detuning + shift
    coupling = a[:, None] * (params.g_lin + 2 * params.g_quad * x[None, :])
    omega_shifted = params.omega_mech + 2 * (np.abs(a) ** 2) @ params.g_quad
    return detuning, coupling, omega_shifted


def steady_means(params: DerivedParams, drive: DriveSpec,
                 damping: float = 0.5, tol: float = 1e-12,
                 max_iter: int = 10_000) -> WorkingPoint:
    """CW fixed point of the mean-field equations.

    The drive specifies the *effective* detunings Delta_i, so the cavity
    means are closed-form; the mean displacements are found by damped
    iteration and the bare detunings back-computed afterwards.
    """
    if any(e > 0 for e in drive.mod_amplitudes):
        raise ValueError("steady_means requires a CW drive")
    e_cw = np.asarray(drive.cw_amplitudes, dtype=float)
    delta_eff = np.asarray(drive.detunings, dtype=float)
    kappa = params.kappa_control()

    a = e_cw / (kappa + 1j * delta_eff)
    n_phot = np.abs(a) ** 2

    x = np.zeros(2)
    residual = math.inf
    for _ in range(max_iter):
        target = -(n_phot @ (params.g_lin + 2 * params.g_quad * x[None, :])) \
            / params.omega_mech
        residual = float(np.max(np.abs(target - x)) / (1 + np.max(np.abs(target))))
        x = (1 - damping) * x + damping * target
        if residual < tol:
            break
    else:
        raise ConvergenceError(
            f"mean-field fixed point stalled (residual {residual:.3e}); "
            "scenario may be bistable", residual)

    bare = delta_eff - (params.g_lin @ x + params.g_quad @ x**2)
    detuning, coupling, omega_shifted = _effective_quantities(params, a, x, bare)
    return WorkingPoint(t=0.0, a=a, x=x, p=np.zeros(2), detuning=detuning,
                        coupling=coupling, omega_shifted=omega_shifted,
                        bare_detuning=bare)


def _mean_rhs(t: float, y: np.ndarray, params: DerivedParams, drive: DriveSpec,
              bare: np.ndarray) -> np.ndarray:
    """RHS of the coherent equations; y = (x1, p1, x2, p2, Re/Im a1, Re/Im a2)."""
    x = y[0:4:2]
    p = y[1:4:2]
    a = y[4::2] + 1j * y[5::2]
    n_phot = np.abs(a) ** 2

    detuning = bare + params.g_lin @ x + params.g_quad @ x**2
    e_t = np.array([drive.amplitude(1, t), drive.amplitude(2, t)])

    dx = params.omega_mech * p
    dp = -params.omega_mech * x - params.gamma * p \
        - n_phot @ (params.g_lin + 2 * params.g_quad * x[None, :])
    da = -(params.kappa_control() + 1j * detuning) * a + e_t

    out = np.empty(8)
    out[0:4:2] = dx
    out[1:4:2] = dp
    out[4::2] = da.real
    out[5::2] = da.imag
    return out


def integrate_means(params: DerivedParams, drive: DriveSpec,
                    t_span: tuple[float, float], dt: float,
                    initial: WorkingPoint | None = None) -> MeanTrajectory:
    """Fixed-step RK4 integration of the coherent dynamics.

    Starts from the CW fixed point of the unmodulated drive unless an
    explicit initial working point is given.  Samples every step, endpoints
    included.
    """
    if initial is None:
        from dataclasses import replace
        cw = replace(drive, mod_amplitudes=(0.0, 0.0), mod_frequency=0.0)
        initial = steady_means(params, cw)
    bare = initial.bare_detuning

    t0, t1 = t_span
    n_steps = max(1, int(round((t1 - t0) / dt)))
    dt = (t1 - t0) / n_steps

    y = np.empty(8)
    y[0:4:2] = initial.x
    y[1:4:2] = initial.p
    y[4::2] = initial.a.real
    y[5::2] = initial.a.imag

    ts = t0 + dt * np.arange(n_steps + 1)
    ys = np.empty((n_steps + 1, 8))
    ys[0] = y
    for k in range(n_steps):
        t = ts[k]
        k1 = _mean_rhs(t, y, params, drive, bare)
        k2 = _mean_rhs(t + dt / 2, y + dt / 2 * k1, params, drive, bare)
        k3 = _mean_rhs(t + dt / 2, y + dt / 2 * k2, params, drive, bare)
        k4 = _mean_rhs(t + dt, y + dt * k3, params, drive, bare)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[k + 1] = y

    x = ys[:, 0:4:2]
    p = ys[:, 1:4:2]
    a = ys[:, 4::2] + 1j * ys[:, 5::2]
    detuning = bare[None, :] + x @ params.g_lin.T + (x**2) @ params.g_quad.T
    coupling = a[:, :, None] * (params.g_lin[None, :, :]
                                + 2 * params.g_quad[None, :, :] * x[:, None, :])
    omega_shifted = params.omega_mech[None, :] + 2 * (np.abs(a) ** 2) @ params.g_quad
    return MeanTrajectory(t=ts, a=a, x=x, p=p, detuning=detuning,
                          coupling=coupling, omega_shifted=omega_shifted,
                          bare_detuning=bare)


def quasistatic_means(params: DerivedParams, drive: DriveSpec,
                      times: np.ndarray) -> MeanTrajectory:
    """Frozen-drive approximation: instantaneous fixed points at E_i(t).

    The bare detunings come from the CW fixed point of the unmodulated
    drive and are held fixed; each sample is then a self-consistent static
    solution of the instantaneous amplitudes.
    """
    from dataclasses import replace
    cw = replace(drive, mod_amplitudes=(0.0, 0.0), mod_frequency=0.0)
    bare = steady_means(params, cw).bare_detuning
    kappa = params.kappa_control()

    n = len(times)
    a = np.empty((n, 2), dtype=complex)
    x = np.empty((n, 2))
    x_cur = np.zeros(2)
    for idx, t in enumerate(times):
        e_t = np.array([drive.amplitude(1, t), drive.amplitude(2, t)])
        for _ in range(10_000):
            delta = bare + params.g_lin @ x_cur + params.g_quad @ x_cur**2
            a_cur = e_t / (kappa + 1j * delta)
            n_phot = np.abs(a_cur) ** 2
            target = -(n_phot @ (params.g_lin + 2 * params.g_quad * x_cur[None, :])) \
                / params.omega_mech
            if np.max(np.abs(target - x_cur)) < 1e-12 * (1 + np.max(np.abs(target))):
                x_cur = target
                break
            x_cur = 0.5 * (x_cur + target)
        a[idx] = e_t / (kappa + 1j * (bare + params.g_lin @ x_cur
                                      + params.g_quad @ x_cur**2))
        x[idx] = x_cur
    detuning = bare[None, :] + x @ params.g_lin.T + (x**2) @ params.g_quad.T
    coupling = a[:, :, None] * (params.g_lin[None, :, :]
                                + 2 * params.g_quad[None, :, :] * x[:, None, :])
    omega_shifted = params.omega_mech[None, :] + 2 * (np.abs(a) ** 2) @ params.g_quad
    return MeanTrajectory(t=np.asarray(times, dtype=float), a=a, x=x,
                          p=np.zeros_like(x), detuning=detuning, coupling=coupling,
                          omega_shifted=omega_shifted, bare_detuning=bare)


def fixed_point_residual(params: DerivedParams, drive: DriveSpec,
                         wp: WorkingPoint) -> float:
    """Relative norm of the CW mean-field equations at a working point."""
    y = np.empty(8)
    y[0:4:2] = wp.x
    y[1:4:2] = wp.p
    y[4::2] = wp.a.real
    y[5::2] = wp.a.imag
    rhs = _mean_rhs(0.0, y, params, drive, wp.bare_detuning)
    scale = max(float(np.max(np.abs(y))), 1.0) * float(np.max(params.kappa))
    return float(np.linalg.norm(rhs)) / scale
