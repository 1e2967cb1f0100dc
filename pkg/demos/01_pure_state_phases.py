# %% [markdown]
# Pure-state geometric phases: the Pancharatnam chain and a precessing spin.

# %%
import math

import numpy as np

from geophase import holonomy as hol
from geophase.evolution import PrecessionParams, unitary_path

# %%
# |0>, |+>, |+i> sit at the corners of one octant of the Bloch sphere.
# The octant covers a solid angle of pi/2, so the Bargmann phase is -pi/4.
kets = [np.array([1, 0]), np.array([1, 1]) / math.sqrt(2), np.array([1, 1j]) / math.sqrt(2)]
octant = hol.pancharatnam_phase(kets)
print(f"octant triple: phase {octant.phase:+.6f} (pi/4 = {math.pi / 4:.6f}), |product| {octant.visibility:.4f}")

# rephasing the states changes nothing
rng = np.random.default_rng(0)
shifted = [k * np.exp(1j * rng.uniform(0, 2 * math.pi)) for k in kets]
print(f"after random rephasing:  {hol.pancharatnam_phase(shifted).phase:+.6f}")

# %%
# A spin starting at |0> precesses about n = (n_x, 0, n_z). A fine Pancharatnam
# chain along the orbit approaches -Omega/2, where Omega is the geodesically
# closed solid angle.
ket0 = np.array([1, 0], dtype=complex)
print("\n n_z    tau    chain(N=2000)   -Omega/2")
for n_x, tau in [(0.6, 1.0), (0.6, math.pi), (1 / math.sqrt(2), 2 * math.pi), (0.3, 5.0)]:
    p = PrecessionParams.from_nx(1.0, n_x, tau)
    chain = [u @ ket0 for u in unitary_path(p.hamiltonian, tau, 2000)]
    fine = hol.pancharatnam_phase(chain).phase
    print(f"{p.n_z:.3f}  {tau:5.3f}   {fine:+.8f}   {hol.pure_qubit_noncyclic(p.n_z, tau):+.8f}")
