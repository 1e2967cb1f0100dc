import math

import numpy as np
import pytest

from conftest import random_hermitian, random_unitary
from geophase import franson as fr
from geophase import holonomy as hol
from geophase.errors import DegenerateSpectrum, IllConditionedFit, ValidationError
from geophase.evolution import PrecessionParams, WaveplateParams
from geophase.numerics import phase_distance
from geophase.states import density_from_bloch


def scan_for(r, alpha, theta, points=16, **kw):
    cfg = fr.FransonConfig(r, WaveplateParams(alpha, theta), fr.chi_grid(points), **kw)
    return fr.coincidence_fringe(cfg)


def test_config_validation():
    plate = WaveplateParams(1.0, 0.0)
    with pytest.raises(ValidationError):
        fr.FransonConfig(0.5, plate, [])
    with pytest.raises(ValidationError):
        fr.FransonConfig(0.5, plate, [0.0, 7.0])
    with pytest.raises(ValidationError):
        fr.FransonConfig(0.5, plate, [1.0, 0.5])
    with pytest.raises(ValidationError):
        fr.FransonConfig(1.5, plate, [0.0])
    with pytest.raises(ValidationError):
        fr.FransonConfig(0.5, plate, [0.0], samples_per_point=0)


def test_source_reduced_state():
    for r in (0.0, 0.4, 1.0):
        assert np.allclose(fr.entangled_source(r).reduced_state(), density_from_bloch((0, 0, r)).matrix)


def test_fringe_shape():
    scan = scan_for(0.5, 2 * math.pi, math.pi / 8)
    assert scan.chi.shape == (16,)
    assert np.all(scan.intensity >= 0)
    assert np.mean(scan.intensity) == pytest.approx(1.0)


@pytest.mark.parametrize("r", [0.0, 0.3, 0.5, 0.8, 1.0])
@pytest.mark.parametrize("alpha", [0.7, math.pi, 2 * math.pi])
@pytest.mark.parametrize("theta", [0.0, math.pi / 8, math.pi / 6, 1.1])
def test_fit_matches_bilocal_overlap(r, alpha, theta):
    plate = WaveplateParams(alpha, theta)
    u, y = fr.franson_unitaries(plate, r)
    expected = fr.bilocal_overlap(fr.entangled_source(r), u, y)
    fit = fr.fit_fringe(scan_for(r, alpha, theta))
    assert fit.visibility == pytest.approx(abs(expected), abs=1e-8)
    if abs(expected) > 1e-6:
        assert phase_distance(fit.phase, np.angle(expected)) < 1e-8


@pytest.mark.parametrize("r", [0.0, 0.5, 0.8, 1.0])
@pytest.mark.parametrize("theta", [0.0, math.pi / 8, math.pi / 6])
def test_cyclic_fringe_visibility(r, theta):
    fit = fr.fit_fringe(scan_for(r, 2 * math.pi, theta))
    assert fit.visibility == pytest.approx(fr.cyclic_visibility(r, theta), abs=1e-8)
    if fit.visibility > 1e-6:
        assert phase_distance(fit.phase, hol.uhlmann_qubit_cyclic(r, math.sin(2 * theta))) < 1e-8


def test_franson_equals_spectral_uhlmann():
    # the plate is a precession with n = (sin 2theta, 0, cos 2theta) for tau = alpha
    for r, alpha, theta in [(0.5, 2.0, 0.3), (0.8, 5.0, math.pi / 6), (0.2, 2 * math.pi, 0.1)]:
        p = PrecessionParams(r, math.sin(2 * theta), math.cos(2 * theta), alpha)
        fit = fr.fit_fringe(scan_for(r, alpha, theta))
        spectral = hol.uhlmann_unitary(p.rho0, p.hamiltonian, alpha)
        assert abs(fit.as_complex() - spectral.as_complex()) < 1e-8


def test_maximally_entangled_is_real():
    for theta in (0.0, 0.3, math.pi / 6, 1.3):
        for alpha in (0.5, 2.0, 2 * math.pi):
            fit = fr.fit_fringe(scan_for(0.0, alpha, theta))
            if fit.visibility > 1e-6:
                assert abs(math.sin(fit.phase)) < 1e-10


def test_branch_flag_reported():
    assert scan_for(0.5, 1.0, math.pi / 2).flags == ("ancilla_theta_branch_convention",)
    assert scan_for(0.5, 1.0, 0.2).flags == ()


def test_poisson_noise_deterministic():
    a = scan_for(0.5, 2 * math.pi, 0.3, samples_per_point=5000, seed=11)
    b = scan_for(0.5, 2 * math.pi, 0.3, samples_per_point=5000, seed=11)
    c = scan_for(0.5, 2 * math.pi, 0.3, samples_per_point=5000, seed=12)
    assert np.array_equal(a.intensity, b.intensity)
    assert not np.array_equal(a.intensity, c.intensity)
    ideal = fr.fit_fringe(scan_for(0.5, 2 * math.pi, 0.3))
    noisy = fr.fit_fringe(a)
    assert noisy.visibility == pytest.approx(ideal.visibility, abs=0.02)
    assert phase_distance(noisy.phase, ideal.phase) < 0.05


def test_fit_recovers_synthetic_fringe(rng):
    chi = np.sort(rng.uniform(0, 2 * math.pi, 9))
    scan = fr.FringeScan(chi, 3.0 * (1 + 0.4 * np.cos(chi - 1.2)))
    fit = fr.fit_fringe(scan)
    assert fit.visibility == pytest.approx(0.4)
    assert fit.phase == pytest.approx(1.2)


def test_fit_errors():
    with pytest.raises(IllConditionedFit):
        fr.fit_fringe(fr.FringeScan([0.0, 1.0], [1.0, 1.0]))
    with pytest.raises(IllConditionedFit):
        fr.fit_fringe(fr.FringeScan([0.0, 1.0, 1.0, 0.0], [1.0, 1.2, 1.2, 1.0]))
    with pytest.raises(ValidationError):
        fr.FringeScan([0.0, 1.0], [1.0, -1.0])


def test_cyclic_visibility_limits():
    assert fr.cyclic_visibility(0.0, 0.4) == pytest.approx(1.0)
    # a -> 0 limit: r = 1, theta = pi/4
    assert fr.cyclic_visibility(1.0, math.pi / 4) == pytest.approx(1.0)
    assert fr.cyclic_visibility(1.0, 0.0) == pytest.approx(1.0)


def test_single_photon_phase(rng):
    chi = fr.chi_grid(12)
    for _ in range(10):
        r = rng.uniform(0.05, 1.0)
        rho0 = density_from_bloch(r * np.array([0, 0, 1]))
        h = random_hermitian(rng, 2)
        tau = rng.uniform(0.1, 6.0)
        _, fit = fr.single_photon_phi_test(rho0, h, tau, chi)
        expected = hol.interferometric_phase(rho0, h, tau)
        assert phase_distance(fit.phase, expected.phase) < 1e-8
        assert fit.visibility == pytest.approx(expected.visibility, abs=1e-8)


def test_single_photon_three_level(rng):
    rho0 = np.diag([0.5, 0.3, 0.2]).astype(complex)
    g = random_unitary(rng, 3)
    rho0 = g @ rho0 @ g.conj().T
    h = random_hermitian(rng, 3)
    _, fit = fr.single_photon_phi_test(rho0, h, 0.9, fr.chi_grid(8))
    assert phase_distance(fit.phase, hol.interferometric_phase(rho0, h, 0.9).phase) < 1e-8


def test_compensation_degenerate():
    with pytest.raises(DegenerateSpectrum):
        fr.compensation_unitary(np.eye(2) / 2, np.diag([1.0, -1.0]), 1.0)
