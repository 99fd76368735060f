"""Two-probe quadratic-coupling measurement of the mechanical covariance.

Two auxiliary cavity modes couple quadratically to the trapped objects: the
"+" mode holds both at its nodes and reads the collective combination
x1 b1 + x2 b2, the "-" mode reads x1 b1^dag - x2 b2^dag.  In the adiabatic
regime the output quadratures are affine in the mechanical ones, so ideal
homodyne statistics determine the full 4x4 mechanical covariance, which this
module reconstructs by inverting that map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Minimum kappa / coupling ratio for the adiabatic (bad-probe) regime.
ADIABATIC_RATIO = 10.0


class AdiabaticityError(ValueError):
    """Probe decay does not dominate the quadratic coupling."""


class ReconstructionError(ValueError):
    """The output-to-mechanics map is singular; names the blind entries."""


@dataclass(frozen=True)
class ProbeSpec:
    """Probe-mode decay, effective quadratic couplings and classical positions."""

    kappa: float
    coupling_plus: float      # sqrt(2) <a_+> Gq_+
    coupling_minus: float     # sqrt(2) <a_-> Gq_-
    mean_x1: float            # classical positions entering the collective ops
    mean_x2: float

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("probe decay must be positive")
        for g in (self.coupling_plus, self.coupling_minus):
            if g < 0:
                raise ValueError("probe couplings must be non-negative")
            if g > 0 and self.kappa / g < ADIABATIC_RATIO:
                raise AdiabaticityError(
                    f"kappa/coupling = {self.kappa / g:.2f} below {ADIABATIC_RATIO}")


def _output_map(probe: ProbeSpec) -> np.ndarray:
    """Matrix M with (X+, Y+, X-, Y-) = M (x1, p1, x2, p2) + input noise.

    Follows from a_out = sqrt(2/kappa) * coupling * (collective operator)
    rotated by the -i prefactor, with b_j = (x_j + i p_j) / sqrt(2).
    """
    cp = math.sqrt(2.0 / probe.kappa) * probe.coupling_plus
    cm = math.sqrt(2.0 / probe.kappa) * probe.coupling_minus
    x1, x2 = probe.mean_x1, probe.mean_x2
    return np.array([
        [0.0, cp * x1, 0.0, cp * x2],      # X+
        [-cp * x1, 0.0, -cp * x2, 0.0],    # Y+
        [0.0, -cm * x1, 0.0, cm * x2],     # X-
        [-cm * x1, 0.0, cm * x2, 0.0],     # Y-
    ])


def output_observables(v_mech: np.ndarray, probe: ProbeSpec) -> np.ndarray:
    """Covariance of the four output quadratures (X+, Y+, X-, Y-).

    Ideal (infinitely averaged) statistics: M V M^T plus the reflected
    vacuum noise of the input fields.
    """
    v_mech = np.asarray(v_mech, dtype=float)
    if v_mech.shape != (4, 4):
        raise ValueError("mechanical covariance must be 4x4")
    m = _output_map(probe)
    return m @ v_mech @ m.T + 0.5 * np.eye(4)


def reconstruction_condition(probe: ProbeSpec) -> float:
    """Condition number of the affine map; grows as |x1/x2| leaves 1."""
    return float(np.linalg.cond(_output_map(probe)))


def reconstruct_mech_cov(v_out: np.ndarray, probe: ProbeSpec) -> np.ndarray:
    """Invert the output map: recover the mechanical covariance.

    Raises ``ReconstructionError`` when entries are unidentifiable (a zero
    classical position or probe gain makes rows of the map vanish).
    """
    v_out = np.asarray(v_out, dtype=float)
    if v_out.shape != (4, 4):
        raise ValueError("output covariance must be 4x4")
    blind = []
    if probe.mean_x1 == 0.0 or (probe.coupling_plus == 0.0 and probe.coupling_minus == 0.0):
        blind.append("mode-1 rows/columns")
    if probe.mean_x2 == 0.0 or (probe.coupling_plus == 0.0 and probe.coupling_minus == 0.0):
        blind.append("mode-2 rows/columns")
    if probe.coupling_plus == 0.0 or probe.coupling_minus == 0.0:
        blind.append("cross moments between the +/- collective sectors")
    if blind:
        raise ReconstructionError("unidentifiable entries: " + "; ".join(blind))

    m = _output_map(probe)
    if np.linalg.matrix_rank(m) < 4:
        raise ReconstructionError("output map is rank deficient")
    signal = v_out - 0.5 * np.eye(4)
    # Least-squares inversion of M V M^T = signal, one side at a time.
    half, *_ = np.linalg.lstsq(m, signal, rcond=None)
    v, *_ = np.linalg.lstsq(m, half.T, rcond=None)
    return 0.5 * (v + v.T)
