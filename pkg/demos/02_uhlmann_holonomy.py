# %% [markdown]
# The Uhlmann phase of a precessing mixed qubit, three ways.

# %%
import math

import numpy as np

from geophase import holonomy as hol
from geophase.evolution import PrecessionParams, precession_path
from geophase.numerics import phase_distance

# %%
# Discrete transport: chain polar decompositions along the sampled path,
# then read off arg <w_0, w_tau>. Compare with the spectral sum and the
# qubit closed form.
p = PrecessionParams.from_nx(0.5, 1 / math.sqrt(2), 2 * math.pi)
closed = hol.uhlmann_qubit_noncyclic(p)
spectral = hol.uhlmann_unitary(p.rho0, p.hamiltonian, p.tau)
print(f"closed form  {closed:+.12f}")
print(f"spectral     {spectral.phase:+.12f}  visibility {spectral.visibility:.6f}")
for steps in (250, 1000, 4000):
    res = hol.uhlmann_discrete(precession_path(p.rho0, p.hamiltonian, p.tau, steps))
    print(f"discrete N={steps:<5d}{res.phase:+.12f}  error {phase_distance(res.phase, closed):.1e}")
# the error drops by 16 for every factor of 4 in N: second order

# %%
# Limits: r = 0 gives no phase at all, r = 1 gives back -Omega/2.
for r in (0.0, 0.3, 0.6, 0.9, 1.0):
    q = PrecessionParams.from_nx(r, 1 / math.sqrt(2), 2 * math.pi)
    print(f"r = {r:.1f}: phi_g = {hol.uhlmann_qubit_noncyclic(q):+.6f}")
print(f"-Omega/2 for the pure state: {hol.pure_qubit_noncyclic(p.n_z, p.tau):+.6f}")

# %%
# The phase belongs to the path, not to the endpoints only: a random
# 3-level state under a random Hamiltonian.
rng = np.random.default_rng(3)
g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
rho = g @ g.conj().T
rho /= np.trace(rho).real
h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
h = 0.5 * (h + h.conj().T)
print("\n3-level:", hol.uhlmann_unitary(rho, h, 1.5).phase, hol.uhlmann_discrete(precession_path(rho, h, 1.5, 2000)).phase)
