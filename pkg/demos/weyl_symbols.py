"""Weyl symbols from position kernels, and the momentum-space rewriting."""

import numpy as np

from cohframe import transforms
from cohframe.fock import FockSpace

space = FockSpace(40)
vac = np.zeros((space.dim, space.dim))
vac[0, 0] = 1.0
for q, p in [(0, 0), (0.5, 0.5), (1, -1)]:
    print(f"|0><0| symbol at ({q}, {p}): {transforms.weyl_symbol(vac, q, p, space).real:.8f}"
          f"  closed form {transforms.vacuum_symbol(q, p):.8f}")

A = transforms.damped_identity(space, 0.6)
print("t^N symbol at origin:", transforms.weyl_symbol(A, 0, 0, space).real,
      "closed form:", transforms.damped_identity_symbol(0, 0, 0.6))

psi = transforms.PositionWavefunction.from_fock([0, 1.0], np.linspace(-20, 20, 4001))
for p in (0.5, -0.5):
    print(f"n = 1 momentum amplitude at p = {p}: {transforms.momentum_amplitude(psi, p):.6f}")
