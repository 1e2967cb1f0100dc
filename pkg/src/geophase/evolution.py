"""Hamiltonians, unitary paths and waveplate unitaries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .numerics import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Z,
    _require_hermitian,
    as_square,
    expm_hermitian_generator,
    hermitian_eig,
)
from .states import DensityOperator, StatePath, as_density, spectral_arrays


@dataclass(frozen=True)
class PrecessionParams:
    """Qubit precession scenario.

    The initial Bloch vector points along +z with length ``r``; the state
    precesses under ``H = (n_x sigma_x + n_z sigma_z) / 2`` for a time ``tau``.
    """

    r: float
    n_x: float
    n_z: float
    tau: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValidationError(f"r must lie in [0, 1], got {self.r}")
        if abs(self.n_x**2 + self.n_z**2 - 1.0) >= 1e-12:
            raise ValidationError("precession axis must satisfy n_x^2 + n_z^2 = 1")
        if self.tau < 0:
            raise ValidationError("tau must be non-negative")

    @classmethod
    def from_nx(cls, r: float, n_x: float, tau: float, nz_sign: float = 1.0):
        if abs(n_x) > 1.0:
            raise ValidationError("|n_x| must not exceed 1")
        n_z = math.copysign(math.sqrt(max(0.0, 1.0 - n_x * n_x)), nz_sign)
        return cls(float(r), float(n_x), n_z, float(tau))

    @property
    def rho0(self) -> DensityOperator:
        from .states import density_from_bloch

        return density_from_bloch((0.0, 0.0, self.r))

    @property
    def hamiltonian(self) -> np.ndarray:
        return precession_hamiltonian(self)


@dataclass(frozen=True)
class WaveplateParams:
    """Retarder with precession angle ``alpha`` and axis angle ``theta`` from vertical."""

    alpha: float
    theta: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValidationError("alpha must be non-negative")

    @property
    def axis(self) -> np.ndarray:
        return np.array([math.sin(2 * self.theta), 0.0, math.cos(2 * self.theta)])


def precession_hamiltonian(p: PrecessionParams) -> np.ndarray:
    return 0.5 * (p.n_x * PAULI_X + p.n_z * PAULI_Z)


def ancilla_hamiltonian(h, rho0) -> np.ndarray:
    """Ancilla generator that makes ``u_t sqrt(rho0) exp(i t Ht)`` parallel.

    In the eigenbasis ``{|k>}`` of ``rho0`` the matrix elements of ``H`` are
    scaled by ``2 sqrt(l_k l_l) / (l_k + l_l)``. Diagonal weights are 1 and
    the weight between two null eigenvectors is 0. The result is returned
    in the original basis.
    """
    h = as_square(h, "H")
    rho0 = as_density(rho0)
    if h.shape != rho0.matrix.shape:
        raise DimensionMismatch(f"H has shape {h.shape}, rho0 has {rho0.matrix.shape}")
    _require_hermitian(h, None)
    lam, q = spectral_arrays(rho0)
    root = np.sqrt(lam)
    num = 2.0 * np.outer(root, root)
    den = lam[:, None] + lam[None, :]
    weights = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    np.fill_diagonal(weights, 1.0)
    h_eig = q.conj().T @ h @ q
    ht = q @ (weights * h_eig) @ q.conj().T
    return 0.5 * (ht + ht.conj().T)


def ancilla_unitary(h, rho0, t: float) -> np.ndarray:
    """``v_t = exp(+i t Ht)`` for the ancilla generator of :func:`ancilla_hamiltonian`."""
    return expm_hermitian_generator(ancilla_hamiltonian(h, rho0), -t)


def unitary_path(h, tau: float, steps: int) -> list[np.ndarray]:
    """``exp(-i t H)`` at ``t = j tau / steps`` for ``j = 0 .. steps``."""
    if steps < 1:
        raise ValidationError("steps must be at least 1")
    vals, vecs = hermitian_eig(h)
    times = np.linspace(0.0, tau, steps + 1)
    phases = np.exp(-1j * np.outer(times, vals))
    stack = np.einsum("ik,tk,jk->tij", vecs, phases, vecs.conj())
    stack[0] = np.eye(vecs.shape[0])
    return list(stack)


def precession_path(rho0, h, tau: float, steps: int) -> StatePath:
    """Path ``rho_t = u_t rho0 u_t^dag`` sampled at ``steps + 1`` points."""
    rho0 = as_density(rho0)
    us = np.stack(unitary_path(h, tau, steps))
    mats = us @ rho0.matrix @ np.conj(np.swapaxes(us, -1, -2))
    return StatePath(np.linspace(0.0, tau, steps + 1), DensityOperator.stack(mats))


def waveplate_unitary(p: WaveplateParams) -> np.ndarray:
    """SU(2) part of a retarder: ``exp(-i alpha/2 n_theta.sigma)``."""
    s2, c2 = math.sin(2 * p.theta), math.cos(2 * p.theta)
    gen = s2 * PAULI_X + c2 * PAULI_Z
    return math.cos(p.alpha / 2) * IDENTITY_2 - 1j * math.sin(p.alpha / 2) * gen


def ancilla_waveplate_params(p: WaveplateParams, r: float) -> WaveplateParams:
    """Plate ``(alpha~, theta~)`` whose adjoint drives the ancilla photon.

    ``alpha~ / alpha = sqrt(1 - r^2 sin^2 2theta)`` and
    ``tan 2theta~ = sqrt(1 - r^2) tan 2theta`` with ``2theta~`` kept in the
    quadrant of ``2theta`` (so ``r = 0`` returns the input plate).
    """
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    if r == 0.0:
        return WaveplateParams(p.alpha, p.theta)
    s2, c2 = math.sin(2 * p.theta), math.cos(2 * p.theta)
    shrink = math.sqrt(max(0.0, 1.0 - r * r * s2 * s2))
    two_theta = math.atan2(math.sqrt(1.0 - r * r) * s2, c2)
    # keep the 2*pi winding of the input angle
    two_theta += 2 * math.pi * round((2 * p.theta - math.atan2(s2, c2)) / (2 * math.pi))
    return WaveplateParams(p.alpha * shrink, 0.5 * two_theta)


def ancilla_branch_flag(theta: float) -> bool:
    """True when ``cos 2theta < 0``, where the quadrant rule for ``theta~`` is a convention."""
    return math.cos(2 * theta) < 0
