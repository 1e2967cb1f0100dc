import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_hermitian, random_unitary
from geophase.errors import DimensionMismatch, NotHermitian, NotPSD
from geophase.numerics import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    expm_hermitian_generator,
    get_tolerance,
    hermitian_eig,
    hs_inner,
    phase_distance,
    polar_unitary,
    psd_sqrt,
    tolerance,
    wrap_phase,
)


def svd_polar(m):
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def test_eig_identity_and_pauli_z():
    vals, vecs = hermitian_eig(np.eye(2))
    assert np.allclose(vals, [1, 1])
    assert np.allclose(vecs.conj().T @ vecs, np.eye(2))
    vals, vecs = hermitian_eig(PAULI_Z)
    assert np.allclose(vals, [-1, 1])
    assert np.allclose(vecs, [[0, 1], [1, 0]])


def test_eig_bloch_state():
    vals, _ = hermitian_eig(0.5 * (np.eye(2) + 0.5 * PAULI_Z))
    assert np.allclose(vals, [0.25, 0.75], atol=1e-15)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_eig_is_deterministic_and_gauge_fixed(rng):
    m = random_hermitian(rng, 4)
    a = hermitian_eig(m)
    b = hermitian_eig(m.copy())
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)
    for col in a.eigenvectors.T:
        k = np.argmax(np.abs(col))
        assert abs(col[k].imag) < 1e-15 and col[k].real > 0


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_eig_reconstruction(rng, n):
    for _ in range(10):
        m = random_hermitian(rng, n)
        vals, vecs = hermitian_eig(m)
        assert np.all(np.diff(vals) >= 0)
        assert np.max(np.abs(vecs @ np.diag(vals) @ vecs.conj().T - m)) < 1e-10
        assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(n))) < 1e-10


def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2, 3]))
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    r = 0.6
    rho = 0.5 * (np.eye(2) + r * PAULI_Z)
    expected = np.diag([np.sqrt((1 + r) / 2), np.sqrt((1 - r) / 2)])
    assert np.max(np.abs(psd_sqrt(rho) - expected)) < 1e-15


def test_psd_sqrt_clamps_roundoff_and_rejects_negative():
    root = psd_sqrt(np.diag([1.0, -5e-10]))
    assert np.allclose(root, np.diag([1.0, 0.0]))
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1e-6]))


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_psd_sqrt_matches_scipy_and_conjugation(rng, n):
    for rank in (n, 1):
        m = random_density(rng, n, rank)
        root = psd_sqrt(m)
        assert np.max(np.abs(root @ root - m)) < 1e-10
        assert np.max(np.abs(root - root.conj().T)) < 1e-14
        assert np.linalg.eigvalsh(root).min() > -1e-12
        if rank == n:
            assert np.max(np.abs(root - scipy.linalg.sqrtm(m))) < 1e-9
        u = random_unitary(rng, n)
        rotated = psd_sqrt(u @ m @ u.conj().T)
        assert np.max(np.abs(rotated @ rotated - u @ m @ u.conj().T)) < 1e-9
        assert np.max(np.abs(rotated - u @ root @ u.conj().T)) < 1e-7


def test_psd_sqrt_accepts_stacks(rng):
    stack = np.stack([random_density(rng, 3) for _ in range(5)])
    roots = psd_sqrt(stack)
    assert np.max(np.abs(roots @ roots - stack)) < 1e-12


def test_polar_examples(rng):
    u = random_unitary(rng, 3)
    assert np.max(np.abs(polar_unitary(u) - u)) < 1e-12
    assert np.allclose(polar_unitary(np.diag([2, 3j])), np.diag([1, 1j]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_polar_matches_svd_for_invertible(rng, n):
    for _ in range(10):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        v = polar_unitary(m)
        assert np.max(np.abs(v - svd_polar(m))) < 1e-10


@pytest.mark.parametrize("n,rank", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_polar_singular_inputs(rng, n, rank):
    for _ in range(10):
        m = random_density(rng, n, rank) @ random_density(rng, n, rank) @ random_unitary(rng, n)
        v = polar_unitary(m)
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-12
        p = v.conj().T @ m
        assert np.max(np.abs(p - p.conj().T)) < 1e-10
        assert np.linalg.eigvalsh(0.5 * (p + p.conj().T)).min() > -1e-10
        # the range part is unique: agrees with the SVD oracle on the image
        oracle_p = svd_polar(m).conj().T @ m
        assert np.max(np.abs(p - oracle_p)) < 1e-9


def test_polar_kernel_completion_is_continuous(rng):
    base = np.diag([1.0, 0.0]).astype(complex)
    v0 = polar_unitary(base)
    assert np.allclose(v0, np.eye(2))
    bumped = base + 1e-12 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    assert np.max(np.abs(polar_unitary(bumped)[:, 0] - v0[:, 0])) < 1e-9


def test_expm_examples():
    assert np.allclose(expm_hermitian_generator(PAULI_Z / 2, np.pi), np.diag([-1j, 1j]))
    assert np.allclose(expm_hermitian_generator(PAULI_X, 0.0), np.eye(2))
    h = 0.5 * (PAULI_X + PAULI_Z) / np.sqrt(2)
    assert np.max(np.abs(expm_hermitian_generator(h, 2 * np.pi) + np.eye(2))) < 1e-12
    with pytest.raises(NotHermitian):
        expm_hermitian_generator(np.array([[0, 1], [0, 0]]), 1.0)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_expm_matches_scipy_and_group_law(rng, n):
    h = random_hermitian(rng, n)
    for t in (0.3, 2.0, 17.0):
        u = expm_hermitian_generator(h, t)
        assert np.max(np.abs(u - scipy.linalg.expm(-1j * t * h))) < 1e-10
        assert np.max(np.abs(u.conj().T @ u - np.eye(n))) < 1e-12
    s, t = 0.7, 1.9
    lhs = expm_hermitian_generator(h, s) @ expm_hermitian_generator(h, t)
    assert np.max(np.abs(lhs - expm_hermitian_generator(h, s + t))) < 1e-10


def test_hs_inner(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert abs(hs_inner(a, b) - np.trace(a.conj().T @ b)) < 1e-12
    assert abs(hs_inner(a, b) - np.conj(hs_inner(b, a))) < 1e-12
    assert hs_inner(a, a).real >= 0 and abs(hs_inner(a, a).imag) < 1e-14
    assert hs_inner(PAULI_X, PAULI_Y) == 0
    w0 = psd_sqrt(0.5 * (np.eye(2) + 0.3 * PAULI_Z))
    assert abs(hs_inner(w0, w0) - 1) < 1e-15
    with pytest.raises(DimensionMismatch):
        hs_inner(np.eye(2), np.eye(3))


def test_tolerance_configuration(monkeypatch):
    assert get_tolerance() == 1e-9
    monkeypatch.setenv("GEOPHASE_TOLERANCE", "1e-6")
    assert get_tolerance() == 1e-6
    psd_sqrt(np.diag([1.0, -5e-7]))
    with tolerance(1e-12):
        assert get_tolerance() == 1e-12
        with pytest.raises(NotPSD):
            psd_sqrt(np.diag([1.0, -5e-7]))
    assert get_tolerance() == 1e-6


def test_wrap_and_distance():
    assert wrap_phase(np.pi) == pytest.approx(np.pi)
    assert wrap_phase(-np.pi) == pytest.approx(np.pi)
    assert wrap_phase(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    assert phase_distance(np.pi - 1e-9, -np.pi + 1e-9) < 1e-8


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 8))
def test_polar_factor_property(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    p = polar_unitary(m).conj().T @ m
    assert np.max(np.abs(p - p.conj().T)) < 1e-10
    assert np.linalg.eigvalsh(0.5 * (p + p.conj().T)).min() > -1e-10
