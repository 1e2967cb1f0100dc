# %% [markdown]
# Uhlmann versus interferometric phase. Both reduce to the pure-state phase
# at r = 1, but in between they disagree.

# %%
import math

import numpy as np

from geophase import holonomy as hol
from geophase.evolution import PrecessionParams

# %%
print("  r     Uhlmann    interferometric")
for r in np.linspace(0.1, 1.0, 10):
    p = PrecessionParams.from_nx(float(r), 1 / math.sqrt(2), 2 * math.pi)
    phi_u = hol.uhlmann_qubit_noncyclic(p)
    phi_i = hol.interferometric_phase(p.rho0, p.hamiltonian, p.tau).phase
    print(f"{r:4.1f}   {phi_u:+.6f}   {phi_i:+.6f}")

# %%
# The interferometric phase needs a nondegenerate spectrum; at r = 0 it is not defined.
p = PrecessionParams.from_nx(0.0, 1 / math.sqrt(2), 2 * math.pi)
try:
    hol.interferometric_phase(p.rho0, p.hamiltonian, p.tau)
except hol.DegenerateSpectrum as exc:
    print("\nr = 0:", exc)
print("Uhlmann phase at r = 0:", hol.uhlmann_unitary(p.rho0, p.hamiltonian, p.tau).phase)
