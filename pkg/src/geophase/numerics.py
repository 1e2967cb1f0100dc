"""Dense complex linear algebra for small matrices.

Everything here is a thin, deterministic layer over ``numpy.linalg.eigh``:
Hermitian eigendecomposition with a reproducible eigenvector gauge, the
PSD square root, the unitary polar factor (with a continuous completion on
the kernel of singular inputs), ``exp(-itH)`` for Hermitian ``H`` and the
Hilbert-Schmidt inner product.

The absolute tolerance used by the Hermiticity and positivity checks is
``1e-9`` unless overridden by the ``GEOPHASE_TOLERANCE`` environment
variable or the :func:`tolerance` context manager.
"""

from __future__ import annotations

import contextlib
import contextvars
import os
from typing import Iterator, NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPSD

DEFAULT_TOLERANCE = 1e-9

_tolerance: contextvars.ContextVar[float | None] = contextvars.ContextVar(
    "geophase_tolerance", default=None
)


def get_tolerance() -> float:
    """Current absolute tolerance for Hermiticity/PSD checks."""
    value = _tolerance.get()
    if value is not None:
        return value
    env = os.environ.get("GEOPHASE_TOLERANCE")
    if env:
        try:
            value = float(env)
        except ValueError as exc:
            raise ValueError(f"GEOPHASE_TOLERANCE is not a number: {env!r}") from exc
        if not value > 0:
            raise ValueError("GEOPHASE_TOLERANCE must be positive")
        return value
    return DEFAULT_TOLERANCE


@contextlib.contextmanager
def tolerance(value: float) -> Iterator[float]:
    """Temporarily override the numerics tolerance (context-local)."""
    if not value > 0:
        raise ValueError("tolerance must be positive")
    token = _tolerance.set(float(value))
    try:
        yield float(value)
    finally:
        _tolerance.reset(token)


def _tol(atol: float | None) -> float:
    return get_tolerance() if atol is None else atol


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def as_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or a.shape[-1] < 1:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m, atol: float | None = None) -> bool:
    return hermiticity_defect(as_square(m)) <= _tol(atol)


def is_unitary(m, atol: float = 1e-10) -> bool:
    m = as_square(m)
    eye = np.eye(m.shape[-1])
    return bool(np.max(np.abs(dagger(m) @ m - eye)) <= atol)


def _require_hermitian(m: np.ndarray, atol: float | None) -> None:
    defect = hermiticity_defect(m)
    if defect > _tol(atol):
        raise NotHermitian(f"matrix is not Hermitian (max |M - M^dag| = {defect:.3g})")


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    # largest-magnitude entry made real positive; first index wins ties
    mags = np.abs(vec)
    idx = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return vec * (np.conj(vec[idx]) / mags[idx])


def hermitian_eig(m, atol: float | None = None) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix with a reproducible gauge.

    Eigenvalues are ascending. Each eigenvector is rephased so that its
    largest-magnitude entry is real and positive; within a group of
    eigenvalues equal to ``atol`` the vectors are ordered lexicographically
    by their (real, imag) entries.
    """
    m = as_square(m)
    if m.ndim != 2:
        raise DimensionMismatch("hermitian_eig expects a single matrix")
    tol = _tol(atol)
    _require_hermitian(m, tol)
    herm = 0.5 * (m + m.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    vecs = np.column_stack([_fix_phase(vecs[:, i]) for i in range(vecs.shape[1])])

    order: list[int] = []
    start = 0
    n = len(vals)
    while start < n:
        stop = start + 1
        while stop < n and vals[stop] - vals[start] <= tol:
            stop += 1
        group = list(range(start, stop))
        if len(group) > 1:
            keys = {
                i: tuple(np.round(np.column_stack([vecs[:, i].real, vecs[:, i].imag]).ravel(), 12))
                for i in group
            }
            group.sort(key=lambda i: keys[i], reverse=True)
        order.extend(group)
        start = stop
    return HermitianEig(vals[order], vecs[:, order])


def psd_sqrt(m, atol: float | None = None) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Accepts a single matrix or a stack of shape ``(..., N, N)``. Eigenvalues
    in ``(-atol, 0)`` are treated as roundoff and clamped to zero.
    """
    m = as_square(m)
    tol = _tol(atol)
    _require_hermitian(m, tol)
    vals, vecs = np.linalg.eigh(0.5 * (m + dagger(m)))
    if np.any(vals < -tol):
        raise NotPSD(f"matrix has negative eigenvalue {vals.min():.3g}")
    roots = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * roots[..., None, :]) @ dagger(vecs)


def _orthonormal_complement(cols: np.ndarray, n: int) -> np.ndarray:
    proj = np.eye(n) - cols @ cols.conj().T
    vals, vecs = np.linalg.eigh(0.5 * (proj + proj.conj().T))
    return vecs[:, vals > 0.5]


def polar_unitary(m, atol: float | None = None) -> np.ndarray:
    """Unitary factor ``V`` of the polar decomposition ``M = V |M|``.

    ``V^dag M = |M|`` is Hermitian PSD. Singular pairs come from the
    Hermitian eigenproblem of ``[[0, M], [M^dag, 0]]`` (eigenvalues ``+-s``),
    which resolves small singular values without squaring them. For singular
    ``M`` the kernel is mapped onto the complement of the range by the
    isometry closest to the identity, which keeps ``V`` continuous under
    small perturbations of ``M``.
    """
    m = as_square(m)
    if m.ndim != 2:
        raise DimensionMismatch("polar_unitary expects a single matrix")
    n = m.shape[0]
    tol = _tol(atol)
    aug = np.zeros((2 * n, 2 * n), dtype=complex)
    aug[:n, n:] = m
    aug[n:, :n] = m.conj().T
    vals, vecs = np.linalg.eigh(aug)
    live = vals > tol * max(1.0, float(vals[-1]))
    left = np.sqrt(2.0) * vecs[:n, live]
    right = np.sqrt(2.0) * vecs[n:, live]
    v = left @ right.conj().T
    if left.shape[1] < n:
        kernel = _orthonormal_complement(right, n)
        comp = _orthonormal_complement(left, n)
        w_u, _, w_vh = np.linalg.svd(comp.conj().T @ kernel)
        v = v + comp @ (w_u @ w_vh) @ kernel.conj().T

    # Newton steps remove residual non-unitarity from singular values near the cutoff
    for _ in range(3):
        if np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-14:
            break
        v = 0.5 * (v + np.linalg.inv(v).conj().T)
    return v


def expm_hermitian_generator(h, t: float, atol: float | None = None) -> np.ndarray:
    """``exp(-i t H)`` for Hermitian ``H``, computed spectrally."""
    vals, vecs = hermitian_eig(h, atol)
    return (vecs * np.exp(-1j * t * vals)) @ vecs.conj().T


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``Tr(A^dag B)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def wrap_phase(phi):
    """Reduce angles to the interval (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(phi, dtype=float), 2 * np.pi)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def phase_distance(phi1, phi2):
    """Chordal distance ``|exp(i phi1) - exp(i phi2)|``, immune to 2*pi jumps."""
    d = np.abs(np.exp(1j * np.asarray(phi1, float)) - np.exp(1j * np.asarray(phi2, float)))
    return float(d) if np.ndim(d) == 0 else d
