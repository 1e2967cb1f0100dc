# %% [markdown]
# Simulated two-photon Franson measurement of the Uhlmann phase.
#
# A polarization-entangled pair sqrt((1+r)/2)|HH> + sqrt((1-r)/2)|VV> goes
# through two unbalanced interferometers. The long arm of the system photon
# holds a waveplate u(alpha, theta); the ancilla photon gets the adjoint of a
# plate with shrunken angle alpha~ and tilted axis theta~.

# %%
import math

import numpy as np

from geophase import franson as fr
from geophase import holonomy as hol
from geophase.evolution import WaveplateParams, ancilla_waveplate_params

# %%
plate = WaveplateParams(2 * math.pi, math.pi / 8)
r = 0.8
tilde = ancilla_waveplate_params(plate, r)
print(f"system plate  alpha {plate.alpha:.4f} theta {plate.theta:.4f}")
print(f"ancilla plate alpha {tilde.alpha:.4f} theta {tilde.theta:.4f}")

cfg = fr.FransonConfig(r, plate, fr.chi_grid(24))
scan = fr.coincidence_fringe(cfg)
fit = fr.fit_fringe(scan)
for chi, rate in zip(scan.chi[::4], scan.intensity[::4]):
    print(f"chi {chi:5.3f}  " + "#" * int(20 * rate))
print(f"fitted phase {fit.phase:+.8f}  closed form {hol.uhlmann_qubit_cyclic(r, math.sin(2 * plate.theta)):+.8f}")
print(f"fitted visibility {fit.visibility:.8f}  closed form {fr.cyclic_visibility(r, plate.theta):.8f}")

# %%
# With finite counts the fit scatters around the ideal values.
for counts in (100, 1000, 10000):
    noisy = fr.fit_fringe(fr.coincidence_fringe(fr.FransonConfig(r, plate, fr.chi_grid(24), counts, seed=5)))
    print(f"{counts:6d} counts/point: phase {noisy.phase:+.4f} visibility {noisy.visibility:.4f}")

# %%
# Maximal entanglement (r = 0) leaves a real overlap: the phase is zero.
for theta in (0.0, math.pi / 8, math.pi / 6):
    f0 = fr.fit_fringe(fr.coincidence_fringe(fr.FransonConfig(0.0, WaveplateParams(2 * math.pi, theta), fr.chi_grid(16))))
    print(f"r = 0, theta {theta:.3f}: phase {f0.phase:+.2e}")

# %%
# One photon, one interferometer: a compensating plate cancels the dynamical
# phase of each eigenstate and the fringe measures the interferometric phase.
rho0 = np.diag([0.75, 0.25]).astype(complex)
h = 0.5 * np.array([[1, 1], [1, -1]]) / math.sqrt(2)
_, single = fr.single_photon_phi_test(rho0, h, 2 * math.pi, fr.chi_grid(12))
print(f"\nsingle photon: {single.phase:+.8f} vs {hol.interferometric_phase(rho0, h, 2 * math.pi).phase:+.8f}")
