"""Photon recoil decides whether levitated nanospheres can be entangled.

For 100 nm levitated spheres the trapping photons scatter into the full
solid angle, and the resulting momentum diffusion is orders of magnitude
more damaging than for tethered disks.  A near-spherical cavity with close
concave mirrors can intercept most of the scattered photons; this scenario
models that by scaling the recoil rate down to 10% (recoil_scale = 0.1).

The script evolves the same modulated scenario at both recoil strengths.
With full recoil the spheres stay far from the inseparability border; at
10% recoil the modulated drive cools and squeezes them dramatically closer
to it, though the remaining recoil diffusion still keeps eta_min above 1/2
for this noise model.

Runtime: a few minutes.
"""

from twintrap import pipeline
from twintrap.scenario import load_scenario, shipped_scenario

scenario = load_scenario(shipped_scenario("fig3_nanosphere"))

for scale in (1.0, 0.1):
    system = scenario.system(recoil_scale=scale)
    heating = (2 * system.params.n_thermal[0] + 1) * system.params.recoil[0]
    result = pipeline.evolve(system, t_max_tau=scenario.numerics.t_max_tau)
    tail = scenario.numerics.store_per_period
    eta_tail = result.eta_min[-tail:].min()
    print(f"recoil_scale = {scale}:")
    print(f"  recoil heating rate (2 nbar_th + 1) Gamma = {heating:.3e} 1/s")
    print(f"  quasi-steady eta_min = {eta_tail:.3f}, "
          f"nbar = {result.nbar1[-1]:.3f}")
    print()
