"""High-level drivers tying model -> meanfield -> dynamics -> gaussian.

Scenario inputs are SI; internally time is rescaled so that Omega_1 = 1,
which keeps every rate within a few decades of unity, and results are
converted back on output.  The natural time unit for reporting is
tau = 4 pi / (Omega_1 + Omega_2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import dynamics, effective, gaussian, meanfield
from .model import DerivedParams, DriveSpec

#: Steps per cycle of the fastest rate in the drift (fixed-step rule).
STEPS_PER_CYCLE = 200


@dataclass(frozen=True)
class System:
    """A derived parameter set with its drive, plus numerics knobs."""

    params: DerivedParams
    drive: DriveSpec
    diffusion_high_t: bool = False
    meanfield_quasistatic: bool = False

    @property
    def tau(self) -> float:
        return 4 * math.pi / float(self.params.omega_mech.sum())

    def rescaled(self, scale: float) -> "System":
        """All rates divided by ``scale`` (time measured in 1/scale units)."""
        p = self.params
        params = replace(
            p,
            omega_mech=p.omega_mech / scale,
            gamma=p.gamma / scale,
            recoil=p.recoil / scale,
            kappa=p.kappa / scale,
            g_lin=p.g_lin / scale,
            g_quad=p.g_quad / scale,
            g_bare=p.g_bare / scale,
        )
        drive = replace(
            self.drive,
            trap_amplitude=self.drive.trap_amplitude / scale,
            cw_amplitudes=tuple(e / scale for e in self.drive.cw_amplitudes),
            mod_amplitudes=tuple(e / scale for e in self.drive.mod_amplitudes),
            mod_frequency=self.drive.mod_frequency / scale,
            detunings=tuple(d / scale for d in self.drive.detunings),
        )
        return System(params=params, drive=drive,
                      diffusion_high_t=self.diffusion_high_t,
                      meanfield_quasistatic=self.meanfield_quasistatic)


def timestep(system: System) -> float:
    """dt <= 2 pi / (200 max(Omega, Delta, kappa, w_D)), in SI seconds."""
    p, d = system.params, system.drive
    fastest = max(float(np.max(p.omega_mech)), float(np.max(np.abs(d.detunings))),
                  float(np.max(p.kappa)), d.mod_frequency)
    return 2 * math.pi / (STEPS_PER_CYCLE * fastest)


def steady_state(system: System) -> tuple[gaussian.EntanglementReport, np.ndarray]:
    """CW steady state: fixed point, Lyapunov solve, entanglement report."""
    sys_n = system.rescaled(float(system.params.omega_mech[0]))
    cw = replace(sys_n.drive, mod_amplitudes=(0.0, 0.0), mod_frequency=0.0)
    wp = meanfield.steady_means(sys_n.params, cw)
    a = dynamics.build_drift(wp, sys_n.params)
    d = dynamics.build_diffusion(sys_n.params, high_t=sys_n.diffusion_high_t)
    report = dynamics.stability_check(a)
    if not report.stable:
        raise dynamics.UnstableSystemError(
            f"CW working point is {report.verdict} (margin {report.margin:.3e})")
    v = dynamics.lyapunov_steady(a, d)
    return gaussian.report_from_covariance(v, stable=True), v


@dataclass(frozen=True)
class EvolveResult:
    """Covariance trajectory with entanglement measures per stored sample."""

    t_over_tau: np.ndarray
    eta_min: np.ndarray
    log_neg: np.ndarray
    nbar1: np.ndarray
    nbar2: np.ndarray
    cov: dynamics.CovTrajectory      # times in tau units
    orbit: dynamics.QuasiSteadyOrbit
    tau: float


def evolve(system: System, t_max_tau: float,
           steps_per_period: int | None = None,
           store_per_period: int = 32,
           v0: np.ndarray | None = None) -> EvolveResult:
    """Integrate the covariance under the (possibly modulated) drive.

    Runs for ``t_max_tau`` units of tau = 4 pi / (Omega1 + Omega2), starting
    from the CW steady state unless ``v0`` is given.  Storage is aligned to
    the drive period so the quasi-steady orbit can be extracted exactly.
    """
    scale = float(system.params.omega_mech[0])
    sys_n = system.rescaled(scale)
    p, drv = sys_n.params, sys_n.drive
    tau = 4 * math.pi / float(p.omega_mech.sum())

    omega_d = drv.mod_frequency
    period = 2 * math.pi / omega_d if omega_d > 0 else tau
    if steps_per_period is None:
        steps_per_period = max(16, int(math.ceil(period / timestep(sys_n))))
    # Keep the store grid commensurate with the drive period.
    store_stride = max(1, steps_per_period // store_per_period)
    steps_per_period = store_stride * int(math.ceil(steps_per_period / store_stride))
    dt = period / steps_per_period

    n_periods = max(1, int(math.ceil(t_max_tau * tau / period)))
    n_steps = n_periods * steps_per_period

    cw = replace(drv, mod_amplitudes=(0.0, 0.0), mod_frequency=0.0)
    wp0 = meanfield.steady_means(p, cw)
    if system.meanfield_quasistatic:
        times = 0.5 * dt * np.arange(2 * n_steps + 1)
        means = meanfield.quasistatic_means(p, drv, times)
    else:
        means = meanfield.integrate_means(p, drv, (0.0, n_steps * dt), dt / 2,
                                          initial=wp0)
    a_half = dynamics.drift_samples(means, p)
    d = dynamics.build_diffusion(p, high_t=sys_n.diffusion_high_t)

    if v0 is None:
        v0 = dynamics.lyapunov_steady(dynamics.build_drift(wp0, p), d)
    traj = dynamics.evolve_covariance(v0, a_half, d, dt, store_stride=store_stride)
    orbit = dynamics.quasi_steady_orbit(traj, omega_d)

    n = len(traj)
    eta = np.empty(n)
    en = np.empty(n)
    nb1 = np.empty(n)
    nb2 = np.empty(n)
    for k in range(n):
        block = gaussian.mechanical_block(traj.v[k])
        eta[k] = gaussian.eta_min(block)
        en[k] = max(0.0, -math.log(2 * eta[k]))
        nb1[k] = gaussian.phonon_occupation(block, 1)
        nb2[k] = gaussian.phonon_occupation(block, 2)
    return EvolveResult(
        t_over_tau=traj.t / tau, eta_min=eta, log_neg=en, nbar1=nb1, nbar2=nb2,
        cov=dynamics.CovTrajectory(t=traj.t / tau, v=traj.v),
        orbit=orbit, tau=tau / scale,
    )


@dataclass(frozen=True)
class EffectiveReport:
    """Adiabatic-elimination summary for a (possibly modulated) drive."""

    j_dc: np.ndarray
    j_first: np.ndarray
    j_second: np.ndarray
    harmonic_residual: float
    omega_sum: float          # rad/s, SI
    omega_half: float
    weak_coupling: bool
    process_tags: list


def effective_report(system: System, periods: int = 1,
                     single_power: bool = False) -> EffectiveReport:
    """J harmonics over the asymptotic mean-field orbit plus advisor output."""
    scale = float(system.params.omega_mech[0])
    sys_n = system.rescaled(scale)
    p, drv = sys_n.params, sys_n.drive

    cw = replace(drv, mod_amplitudes=(0.0, 0.0), mod_frequency=0.0)
    wp = meanfield.steady_means(p, cw)
    omega_d = drv.mod_frequency

    if omega_d > 0:
        period = 2 * math.pi / omega_d
        dt = min(timestep(sys_n), period / 256)
        # Let mean-field transients die out before projecting harmonics.
        settle = 20.0 / float(np.min(p.kappa_control()))
        n_settle = int(math.ceil(settle / dt))
        n_proj = periods * int(math.ceil(period / dt))
        dt = periods * period / n_proj
        traj = meanfield.integrate_means(
            p, drv, (0.0, (n_settle + n_proj) * dt), dt, initial=wp)
        tail_t = traj.t[n_settle:]
        j_t = effective.effective_J_series(
            meanfield.MeanTrajectory(
                t=tail_t, a=traj.a[n_settle:], x=traj.x[n_settle:],
                p=traj.p[n_settle:], detuning=traj.detuning[n_settle:],
                coupling=traj.coupling[n_settle:],
                omega_shifted=traj.omega_shifted[n_settle:],
                bare_detuning=traj.bare_detuning),
            p, single_power=single_power)
        harm = effective.modulation_harmonics(tail_t, j_t, omega_d)
    else:
        j0 = effective.effective_J(wp, p, single_power=single_power)
        harm = effective.HarmonicDecomposition(
            dc=j0, first=np.zeros((2, 2)), second=np.zeros((2, 2)), residual=0.0)

    advisor = effective.resonance_advisor(*wp.omega_shifted)
    tags = effective.rwa_classify(wp.omega_shifted[0], wp.omega_shifted[1], omega_d)
    return EffectiveReport(
        j_dc=harm.dc * scale, j_first=harm.first * scale, j_second=harm.second * scale,
        harmonic_residual=harm.residual,
        omega_sum=advisor["omega_sum"] * scale,
        omega_half=advisor["omega_half"] * scale,
        weak_coupling=effective.weak_coupling_ok(wp, p),
        process_tags=tags,
    )
