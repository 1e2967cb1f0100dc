"""Density operators, qubit Bloch vectors and state paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BlochNormExceeded, DimensionMismatch, InvalidDensity, NotPSD
from .numerics import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    _require_hermitian,
    _tol,
    as_square,
    hermitian_eig,
    psd_sqrt,
)

TRACE_TOLERANCE = 1e-9
# eigenvalues this small are eigh roundoff on an exactly rank-deficient state
ROUNDOFF_EIGENVALUE = 1e-14


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Trace drift up to ``1e-9`` is removed by rescaling; anything larger is
    rejected, as are eigenvalues below ``-tolerance``.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square(self.matrix, "density matrix")
        if m.ndim != 2:
            raise DimensionMismatch("density operator must be a single matrix")
        m = _validated_stack(m[None])[0]
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def stack(cls, matrices) -> tuple["DensityOperator", ...]:
        """Validate a ``(K, N, N)`` stack in one pass and wrap each slice."""
        mats = _validated_stack(as_square(matrices, "density matrices"))
        mats.setflags(write=False)
        out = []
        for m in mats:
            obj = object.__new__(cls)
            object.__setattr__(obj, "matrix", m)
            out.append(obj)
        return tuple(out)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype)

    def evolve(self, u) -> "DensityOperator":
        u = np.asarray(u, dtype=complex)
        return DensityOperator(u @ self.matrix @ u.conj().T)


def _validated_stack(mats: np.ndarray) -> np.ndarray:
    tol = _tol(None)
    _require_hermitian(mats, tol)
    mats = 0.5 * (mats + np.conj(np.swapaxes(mats, -1, -2)))
    traces = np.trace(mats, axis1=-2, axis2=-1).real
    drift = np.abs(traces - 1.0)
    if np.any(drift > TRACE_TOLERANCE):
        raise InvalidDensity(f"trace is {traces[np.argmax(drift)]!r}, expected 1")
    mats = mats / traces[:, None, None]
    lowest = float(np.linalg.eigvalsh(mats)[:, 0].min())
    if lowest < -tol:
        raise NotPSD(f"density matrix has negative eigenvalue {lowest:.3g}")
    return mats


def as_density(rho) -> DensityOperator:
    return rho if isinstance(rho, DensityOperator) else DensityOperator(rho)


@dataclass(frozen=True)
class BlochVector:
    r_x: float
    r_y: float
    r_z: float

    def __post_init__(self):
        if self.norm > 1 + 1e-9:
            raise BlochNormExceeded(f"Bloch vector length {self.norm:.12g} exceeds 1")

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.r_x**2 + self.r_y**2 + self.r_z**2))

    def as_array(self) -> np.ndarray:
        return np.array([self.r_x, self.r_y, self.r_z])


@dataclass(frozen=True, eq=False)
class StatePath:
    """Discretized path of density operators ``t -> rho_t``."""

    times: np.ndarray
    states: tuple[DensityOperator, ...] = field(default=())

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = tuple(as_density(s) for s in self.states)
        if len(states) < 2 or len(times) != len(states):
            raise ValueError("a path needs at least two states and one time per state")
        if np.any(np.diff(times) < 0):
            raise ValueError("times must be ascending")
        if len({s.dim for s in states}) != 1:
            raise DimensionMismatch("all states on a path must share a dimension")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)

    def matrices(self) -> np.ndarray:
        return np.stack([s.matrix for s in self.states])


def density_from_bloch(b: BlochVector | Sequence[float]) -> DensityOperator:
    """Qubit state ``(1 + b.sigma) / 2``."""
    if not isinstance(b, BlochVector):
        b = BlochVector(*map(float, b))
    m = 0.5 * (np.eye(2) + b.r_x * PAULI_X + b.r_y * PAULI_Y + b.r_z * PAULI_Z)
    return DensityOperator(m)


def density_to_bloch(rho) -> BlochVector:
    m = np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionMismatch(f"Bloch vectors are defined for qubits, got shape {m.shape}")
    comps = [float(np.trace(m @ s).real) for s in (PAULI_X, PAULI_Y, PAULI_Z)]
    return BlochVector(*comps)


def spectral(rho) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of ``rho`` in descending eigenvalue order.

    Negative and roundoff-sized eigenvalues are clamped to zero.
    """
    rho = as_density(rho)
    vals, vecs = hermitian_eig(rho.matrix)
    vals = np.where(vals < ROUNDOFF_EIGENVALUE, 0.0, vals)
    return [(float(vals[i]), vecs[:, i]) for i in range(len(vals) - 1, -1, -1)]


def spectral_arrays(rho) -> tuple[np.ndarray, np.ndarray]:
    """``spectral`` as ``(eigenvalues, eigenvector columns)`` arrays."""
    pairs = spectral(rho)
    return np.array([p for p, _ in pairs]), np.column_stack([v for _, v in pairs])


def bures_overlap(rho1, rho2) -> float:
    """Root fidelity ``Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))``."""
    a = as_density(rho1).matrix
    b = as_density(rho2).matrix
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    root = psd_sqrt(a)
    inner = root @ b @ root
    value = float(np.trace(psd_sqrt(0.5 * (inner + inner.conj().T))).real)
    return min(max(value, 0.0), 1.0)
