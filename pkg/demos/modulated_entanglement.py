"""Entangling two microdisks by modulating one control drive.

Modulating the second control field at the sum of the two mechanical
frequencies activates a resonant two-mode squeezing process between the
disks.  The covariance matrix then settles into a periodic (quasi-steady)
orbit whose minimum symplectic eigenvalue dips below 1/2: the motion of the
two disks is inseparable.  Driving at half the sum frequency also works,
through the second harmonic of the effective coupling, but less
efficiently.

Runtime: a few minutes (the covariance is integrated over tens of
thousands of drive periods).
"""

from twintrap import pipeline
from twintrap.scenario import load_scenario, shipped_scenario

HORIZON_TAU = 120  # evolution horizon in units of tau = 4 pi/(W1 + W2)

for name, label in (("fig2_sum", "sum frequency  w_D = W1 + W2"),
                    ("fig2_half", "half frequency w_D = (W1 + W2)/2")):
    scenario = load_scenario(shipped_scenario(name))
    system = scenario.system()
    result = pipeline.evolve(system, t_max_tau=HORIZON_TAU)
    tail = scenario.numerics.store_per_period
    eta_tail = result.eta_min[-tail:].min()
    en_tail = result.log_neg[-tail:].max()
    print(f"{label}")
    print(f"  quasi-steady orbit converged: {result.orbit.converged} "
          f"(period-to-period change {result.orbit.period_change:.2e})")
    print(f"  eta_min over last period: {eta_tail:.4f} "
          f"({'entangled' if eta_tail < 0.5 else 'separable'})")
    print(f"  peak logarithmic negativity: {en_tail:.4f}")
    print()

print("The sum-frequency drive produces the stronger entanglement, as the "
      "first harmonic of the")
print("effective mechanical coupling dominates the second; compare "
      "`twintrap effective`.")
