"""Gaussian-state analysis: symplectic spectra, entanglement, occupations.

Quadrature convention [x, p] = i, vacuum variance 1/2; a two-mode state is
inseparable iff the minimum symplectic eigenvalue of its partial transpose
drops below 1/2.  Logarithmic negativity uses the natural logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Pairing tolerance for the +/- symplectic eigenvalue pairs.
PAIRING_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal form for the (x1, p1, ..., xn, pn) ordering."""
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for m in range(n_modes):
        out[2 * m:2 * m + 2, 2 * m:2 * m + 2] = block
    return out


def mechanical_block(v: np.ndarray) -> np.ndarray:
    """Reduced covariance of the two mechanical modes (first four rows/cols)."""
    v = np.asarray(v, dtype=float)
    if v.shape == (4, 4):
        return v.copy()
    return v[:4, :4].copy()


def partial_transpose(v: np.ndarray, party: int = 2) -> np.ndarray:
    """Momentum sign flip of one mode of a two-mode covariance matrix."""
    v = np.asarray(v, dtype=float)
    if v.shape != (4, 4):
        raise ValueError("partial transpose acts on a two-mode (4x4) covariance")
    if party not in (1, 2):
        raise ValueError("party must be 1 or 2")
    flip = np.diag([1.0, -1.0, 1.0, 1.0] if party == 1 else [1.0, 1.0, 1.0, -1.0])
    return flip @ v @ flip


def symplectic_spectrum(v: np.ndarray) -> np.ndarray:
    """Moduli of the eigenvalues of i Sigma V, deduplicated to n values.

    Requires a symmetric positive-definite covariance; the raw spectrum
    comes in +/- pairs which are matched after sorting.
    """
    v = np.asarray(v, dtype=float)
    n2 = v.shape[0]
    if v.shape != (n2, n2) or n2 % 2:
        raise ValueError("covariance must be square and even-dimensional")
    scale = np.max(np.abs(v))
    if np.max(np.abs(v - v.T)) > 1e-10 * max(scale, 1.0):
        raise ValueError("covariance must be symmetric")
    if np.min(np.linalg.eigvalsh(0.5 * (v + v.T))) <= 0:
        raise ValueError("covariance must be positive definite")
    raw = np.abs(np.linalg.eigvals(symplectic_form(n2 // 2) @ v))
    raw.sort()
    pairs = raw.reshape(-1, 2)
    if np.max(np.abs(pairs[:, 0] - pairs[:, 1])) > PAIRING_TOL * max(raw[-1], 1.0):
        raise ValueError("symplectic spectrum failed to pair")
    return pairs.mean(axis=1)


def eta_min(v: np.ndarray) -> float:
    """Minimum symplectic eigenvalue of the partially transposed two-mode state."""
    block = mechanical_block(v)
    return float(symplectic_spectrum(partial_transpose(block)).min())


def log_negativity(v: np.ndarray, base2: bool = False) -> float:
    """E_N = max{0, -ln(2 eta_min)}; ``base2`` rescales to log2 for comparison."""
    e_n = max(0.0, -math.log(2.0 * eta_min(v)))
    return e_n / math.log(2.0) if base2 else e_n


def phonon_occupation(v: np.ndarray, mode: int) -> float:
    """Mean phonon number of mechanical mode 1 or 2 from its variances."""
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    j = 2 * (mode - 1)
    return float((v[j, j] + v[j + 1, j + 1] - 1.0) / 2.0)


def two_mode_squeezed_cov(r: float, n_mean: float = 0.0) -> np.ndarray:
    """Covariance of a (possibly thermal) two-mode squeezed state; test helper."""
    c = (n_mean + 0.5) * math.cosh(2 * r)
    s = (n_mean + 0.5) * math.sinh(2 * r)
    return np.array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])


@dataclass(frozen=True)
class EntanglementReport:
    """Entanglement and occupation summary for one scenario or time sample."""

    eta_min: float
    log_neg: float
    nbar1: float
    nbar2: float
    stable: bool
    t: float = 0.0

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "eta_min": self.eta_min,
            "log_negativity": self.log_neg,
            "nbar1": self.nbar1,
            "nbar2": self.nbar2,
            "stable": self.stable,
        }


def report_from_covariance(v: np.ndarray, stable: bool, t: float = 0.0) -> EntanglementReport:
    """Full report from an 8x8 (or mechanical 4x4) covariance matrix."""
    block = mechanical_block(v)
    return EntanglementReport(
        eta_min=eta_min(block),
        log_neg=log_negativity(block),
        nbar1=phonon_occupation(block, 1),
        nbar2=phonon_occupation(block, 2),
        stable=stable,
        t=t,
    )
