"""Built-in invariant suite behind ``geophase check``.

Each check is a quick, deterministic numerical property of the library.
The full versions, with wider sampling, live in the test suite.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from . import evolution as ev
from . import franson as fr
from . import holonomy as hol
from .numerics import expm_hermitian_generator, phase_distance, polar_unitary, psd_sqrt
from .states import bures_overlap, density_from_bloch


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_density(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = g @ g.conj().T
    return m / np.trace(m).real


def _random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (g + g.conj().T)


def check_numerics() -> CheckResult:
    rng = np.random.default_rng(1)
    worst = 0.0
    for n in (2, 3, 4):
        m = _random_density(rng, n)
        root = psd_sqrt(m)
        worst = max(worst, np.max(np.abs(root @ root - m)))
        v = polar_unitary(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        worst = max(worst, np.max(np.abs(v.conj().T @ v - np.eye(n))))
        h = _random_hermitian(rng, n)
        prod = expm_hermitian_generator(h, 0.3) @ expm_hermitian_generator(h, 0.4)
        worst = max(worst, np.max(np.abs(prod - expm_hermitian_generator(h, 0.7))))
    return CheckResult("numerics reconstruction", worst < 1e-10, f"max error {worst:.2e}")


def check_closed_vs_discrete() -> CheckResult:
    worst = 0.0
    for r, nx, tau in [(0.5, 1 / math.sqrt(2), 2 * math.pi), (0.8, 0.4, 1.5 * math.pi), (0.3, 1.0, math.pi / 3)]:
        p = ev.PrecessionParams.from_nx(r, nx, tau)
        path = ev.precession_path(p.rho0, p.hamiltonian, tau, 2000)
        worst = max(worst, phase_distance(hol.uhlmann_discrete(path).phase, hol.uhlmann_qubit_noncyclic(p)))
    return CheckResult("uhlmann discrete vs closed form", worst < 1e-4, f"max |dphase| {worst:.2e}")


def check_maximally_mixed() -> CheckResult:
    p = ev.PrecessionParams.from_nx(0.0, 0.6, 2.0)
    res = hol.uhlmann_unitary(p.rho0, p.hamiltonian, p.tau)
    ok = abs(res.phase) < 1e-10 and abs(res.visibility - 1) < 1e-10
    try:
        hol.interferometric_phase(p.rho0, p.hamiltonian, p.tau)
        ok = False
    except hol.DegenerateSpectrum:
        pass
    return CheckResult("maximally mixed state", ok, f"phase {res.phase:.2e}, visibility {res.visibility:.12f}")


def check_purification_equivalence() -> CheckResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in (2, 3, 4):
        rho = _random_density(rng, n)
        h = _random_hermitian(rng, n)
        tau = float(rng.uniform(0.1, 3.0))
        spectral_form = hol.uhlmann_unitary(rho, h, tau).as_complex()
        y = hol.eigenbasis_transpose(ev.ancilla_unitary(h, rho, tau), rho)
        bilocal = hol.purified_overlap(rho, expm_hermitian_generator(h, tau), y).as_complex()
        worst = max(worst, abs(spectral_form - bilocal))
    return CheckResult("spectral vs bi-local Uhlmann overlap", worst < 1e-10, f"max |diff| {worst:.2e}")


def check_ancilla_hamiltonian() -> CheckResult:
    worst = 0.0
    for r in (0.0, 0.5, 1.0):
        p = ev.PrecessionParams.from_nx(r, 0.6, 1.0)
        expected = 0.5 * (math.sqrt(1 - r * r) * 0.6 * ev.PAULI_X + 0.8 * ev.PAULI_Z)
        worst = max(worst, np.max(np.abs(ev.ancilla_hamiltonian(p.hamiltonian, p.rho0) - expected)))
    return CheckResult("ancilla Hamiltonian qubit form", worst < 1e-12, f"max error {worst:.2e}")


def check_maximality() -> CheckResult:
    rho0 = density_from_bloch((0.1, 0.2, 0.5))
    rho1 = density_from_bloch((-0.3, 0.4, 0.1))
    res = hol.uhlmann_discrete(hol.StatePath([0.0, 1.0], [rho0, rho1]))
    diff = abs(res.visibility - bures_overlap(rho0, rho1))
    return CheckResult("two-point visibility equals Bures overlap", diff < 1e-8 and abs(res.phase) < 1e-10, f"|diff| {diff:.2e}")


def check_franson() -> CheckResult:
    worst = 0.0
    for r, theta in [(0.5, math.pi / 8), (0.8, math.pi / 6), (1.0, math.pi / 8)]:
        cfg = fr.FransonConfig(r, ev.WaveplateParams(2 * math.pi, theta), fr.chi_grid(16))
        fit = fr.fit_fringe(fr.coincidence_fringe(cfg))
        worst = max(worst, abs(fit.visibility - fr.cyclic_visibility(r, theta)))
        worst = max(worst, phase_distance(fit.phase, hol.uhlmann_qubit_cyclic(r, math.sin(2 * theta))))
    return CheckResult("Franson fringe vs cyclic closed forms", worst < 1e-8, f"max error {worst:.2e}")


def check_interferometric() -> CheckResult:
    worst = 0.0
    for r in (0.3, 0.5, 1.0):
        p = ev.PrecessionParams.from_nx(r, 0.6, 2 * math.pi)
        omega = hol.solid_angle_precession(p.n_z, p.tau)
        got = hol.interferometric_phase(p.rho0, p.hamiltonian, p.tau).phase
        worst = max(worst, phase_distance(got, hol.interferometric_qubit(r, omega)))
    return CheckResult("interferometric phase closed form", worst < 1e-6, f"max error {worst:.2e}")


def check_distinct() -> CheckResult:
    p = ev.PrecessionParams.from_nx(0.5, 1 / math.sqrt(2), 2 * math.pi)
    gap = abs(hol.uhlmann_qubit_noncyclic(p) - hol.interferometric_phase(p.rho0, p.hamiltonian, p.tau).phase)
    return CheckResult("Uhlmann and interferometric phases differ", gap > 0.05, f"gap {gap:.4f} rad")


CHECKS: list[Callable[[], CheckResult]] = [
    check_numerics,
    check_ancilla_hamiltonian,
    check_maximally_mixed,
    check_maximality,
    check_closed_vs_discrete,
    check_purification_equivalence,
    check_interferometric,
    check_distinct,
    check_franson,
]


def run_checks() -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failed check
            results.append(CheckResult(check.__name__, False, f"{type(exc).__name__}: {exc}"))
    return results
