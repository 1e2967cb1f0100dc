# %% [markdown]
# What makes a purification parallel.
#
# Along u_t sqrt(rho0) v_t the generator w^dag dw/dt must be Hermitian.
# The ancilla rotation v_t = exp(i t Ht) does that job.

# %%
import math

from geophase import holonomy as hol
from geophase.evolution import PrecessionParams, ancilla_hamiltonian, ancilla_unitary, unitary_path
from geophase.numerics import psd_sqrt

# %%
p = PrecessionParams.from_nx(0.5, 1 / math.sqrt(2), 2 * math.pi)
print("H  =\n", p.hamiltonian.real)
print("Ht =\n", ancilla_hamiltonian(p.hamiltonian, p.rho0).real.round(6))

# %%
root = psd_sqrt(p.rho0.matrix)
print("\n steps   with ancilla   without")
for steps in (100, 400, 1600):
    dt = p.tau / steps
    good = hol.continuous_parallel_lift(p.rho0, p.hamiltonian, p.tau, steps)
    bad = [u @ root for u in unitary_path(p.hamiltonian, p.tau, steps)]
    print(f"{steps:6d}   {hol.check_uhlmann_parallel(good, dt):.2e}     {hol.check_uhlmann_parallel(bad, dt):.2e}")

# %%
# As a bipartite state the same lift is (u_t (x) y_t) Psi_0 with y the
# eigenbasis transpose of v. Its overlap with Psi_0 is the Uhlmann amplitude.
y = hol.eigenbasis_transpose(ancilla_unitary(p.hamiltonian, p.rho0, p.tau), p.rho0)
u = unitary_path(p.hamiltonian, p.tau, 1)[-1]
print("\nbi-local overlap:", hol.purified_overlap(p.rho0, u, y).as_complex())
print("spectral sum:    ", hol.uhlmann_unitary(p.rho0, p.hamiltonian, p.tau).as_complex())
