"""Sliced coherent-state propagator of the oscillator against the exact kernel."""

import numpy as np

from cohframe import ladder, propagator

H = ladder.harmonic()
z1, z2 = 0.5, 0.4 - 0.2j
exact = lambda T: propagator.oscillator_propagator(z1, z2, T)  # noqa: E731

p, C, rows = propagator.slicing_error_fit(z1, z2, [0.4, 0.2, 0.1, 0.05], H, exact)
print("T       tau     |K_N - K|")
for T, tau, err in rows:
    print(f"{T:<7.3g} {tau:<7.3g} {err:.3e}")
print(f"fitted error ~ C tau^p with p = {p:.3f}")

mc = propagator.discrete_propagator(z1, z2, 0.4, 3, np.zeros(5), H, monte_carlo=True, seed=1)
print(f"N = 3 Monte Carlo: {mc.value:.6f} +- {mc.error_estimate:.1e} (exact {exact(0.4):.6f})")
