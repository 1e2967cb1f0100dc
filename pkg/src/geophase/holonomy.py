"""Pure and mixed-state geometric phases.

Two mixed-state phases are computed here:

* the Uhlmann phase ``arg <w_0, w_tau>`` of a parallel purification, either
  by discrete polar-decomposition transport along an arbitrary path of
  density operators, spectrally for unitary evolution, or as a bi-local
  overlap of a purified system+ancilla state;
* the interferometric phase ``arg sum_k l_k nu_k exp(i beta_k)``, where each
  eigenvector of the initial state is transported in parallel on its own.

Closed forms for a precessing qubit are provided for both, together with
diagnostics that measure how far a lift is from being parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DegenerateStep,
    DimensionMismatch,
    IndeterminatePhase,
    ValidationError,
)
from .evolution import PrecessionParams, ancilla_hamiltonian, ancilla_unitary, unitary_path
from .numerics import (
    _require_hermitian,
    as_square,
    dagger,
    expm_hermitian_generator,
    hs_inner,
    polar_unitary,
    psd_sqrt,
    wrap_phase,
)
from .states import StatePath, as_density, spectral_arrays

VISIBILITY_FLOOR = 1e-8
DEGENERACY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PhaseResult:
    """Phase in (-pi, pi] with the modulus of the complex quantity it came from.

    ``phase_defined`` is False when the modulus is below the visibility floor;
    ``phase`` is then still reported but carries no information.
    """

    phase: float
    visibility: float
    phase_defined: bool = True
    flags: tuple[str, ...] = field(default=())

    @classmethod
    def from_complex(cls, z: complex, floor: float = VISIBILITY_FLOOR, flags=()):
        vis = abs(z)
        return cls(wrap_phase(np.angle(z)), float(vis), bool(vis >= floor), tuple(flags))

    def as_complex(self) -> complex:
        return self.visibility * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True, eq=False)
class Amplitude:
    """Hilbert-Schmidt operator ``w`` purifying ``rho = w w^dag``."""

    matrix: np.ndarray

    def __post_init__(self):
        w = as_square(self.matrix, "amplitude")
        rho = w @ w.conj().T
        if abs(np.trace(rho).real - 1) > 1e-8 or np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[0] < -1e-8:
            raise ValidationError("w w^dag is not a density operator")
        object.__setattr__(self, "matrix", w)

    @property
    def density(self) -> np.ndarray:
        return self.matrix @ self.matrix.conj().T


@dataclass(frozen=True, eq=False)
class PurifiedState:
    """System+ancilla pure state, system index first (``kron`` ordering)."""

    dim_s: int
    dim_a: int
    amplitudes: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.amplitudes, dtype=complex).ravel()
        if psi.size != self.dim_s * self.dim_a:
            raise DimensionMismatch("amplitude vector does not match dim_s * dim_a")
        if abs(np.linalg.norm(psi) - 1) > 1e-10:
            raise ValidationError("purified state is not normalized")
        object.__setattr__(self, "amplitudes", psi)

    def as_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dim_s, self.dim_a)

    def reduced_state(self) -> np.ndarray:
        """Partial trace over the ancilla."""
        m = self.as_matrix()
        return m @ m.conj().T

    def overlap(self, other: "PurifiedState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def _unit_vectors(states) -> list[np.ndarray]:
    vecs = [np.asarray(s, dtype=complex).ravel() for s in states]
    if len({v.size for v in vecs}) != 1:
        raise DimensionMismatch("all states must share a dimension")
    for v in vecs:
        if abs(np.linalg.norm(v) - 1) > 1e-9:
            raise ValidationError("states must be unit vectors")
    return vecs


# -- pure states -----------------------------------------------------------


def pancharatnam_phase(states: Sequence) -> PhaseResult:
    """Bargmann phase ``arg(<psi_0|psi_N> <psi_N|psi_N-1> ... <psi_1|psi_0>)``.

    The result is invariant under independent rephasing of every state.
    ``phase_defined`` is False if any overlap in the cycle is below the floor.
    """
    vecs = _unit_vectors(states)
    if len(vecs) < 2:
        raise ValidationError("need at least two states")
    links = [np.vdot(vecs[j + 1], vecs[j]) for j in range(len(vecs) - 1)]
    links.append(np.vdot(vecs[0], vecs[-1]))
    product = complex(np.prod(links))
    defined = min(abs(z) for z in links) >= VISIBILITY_FLOOR
    return PhaseResult(wrap_phase(np.angle(product)), abs(product), defined)


def pure_geometric_phase(psi0, h, tau: float) -> PhaseResult:
    """Noncyclic geometric phase of ``exp(-i t H)|psi0>`` for ``t`` in ``[0, tau]``.

    Total phase ``arg <psi0|u_tau|psi0>`` minus the dynamical phase
    ``-tau <psi0|H|psi0>``.
    """
    psi0 = _unit_vectors([psi0])[0]
    h = as_square(h, "H")
    _require_hermitian(h, None)
    u = expm_hermitian_generator(h, tau)
    amp = complex(np.vdot(psi0, u @ psi0))
    energy = float(np.vdot(psi0, h @ psi0).real)
    return PhaseResult(wrap_phase(np.angle(amp) + tau * energy), abs(amp), abs(amp) >= VISIBILITY_FLOOR)


# -- Uhlmann holonomy --------------------------------------------------------


def parallel_lift(path: StatePath) -> list[np.ndarray]:
    """Amplitudes ``w_j = sqrt(rho_j) U_j`` with every ``w_{j+1}^dag w_j >= 0``.

    ``U_0 = 1`` and ``U_{j+1}`` is the polar unitary of
    ``sqrt(rho_{j+1}) sqrt(rho_j) U_j``.
    """
    roots = psd_sqrt(path.matrices())
    n = roots.shape[-1]
    unitary = np.eye(n, dtype=complex)
    lift = [roots[0].copy()]
    for j in range(len(roots) - 1):
        step = roots[j + 1] @ roots[j]
        if np.linalg.norm(step) < VISIBILITY_FLOOR:
            raise DegenerateStep(f"consecutive states {j} and {j + 1} have orthogonal supports")
        unitary = polar_unitary(step @ unitary)
        lift.append(roots[j + 1] @ unitary)
    return lift


def uhlmann_discrete(path: StatePath) -> PhaseResult:
    """Uhlmann phase of a sampled path via discrete parallel transport."""
    lift = parallel_lift(path)
    return PhaseResult.from_complex(hs_inner(lift[0], lift[-1]))


def uhlmann_unitary(rho0, h, tau: float) -> PhaseResult:
    """Uhlmann phase for ``rho_t = u_t rho0 u_t^dag`` with time-independent ``H``.

    Evaluates ``sum_kl sqrt(l_k l_l) <l|u_tau|k> <k|v_tau|l>`` with
    ``v_tau = exp(i tau Ht)`` and ``Ht`` from :func:`ancilla_hamiltonian`.
    """
    rho0 = as_density(rho0)
    lam, q = spectral_arrays(rho0)
    u = expm_hermitian_generator(h, tau)
    v = ancilla_unitary(h, rho0, tau)
    u_e = q.conj().T @ u @ q
    v_e = q.conj().T @ v @ q
    root = np.sqrt(lam)
    total = np.sum(np.outer(root, root) * u_e.T * v_e)
    return PhaseResult.from_complex(complex(total))


def continuous_parallel_lift(rho0, h, tau: float, steps: int) -> list[np.ndarray]:
    """Exact parallel lift ``u_t sqrt(rho0) v_t`` sampled at ``steps + 1`` times."""
    rho0 = as_density(rho0)
    root = psd_sqrt(rho0.matrix)
    ht = ancilla_hamiltonian(h, rho0)
    times = np.linspace(0.0, tau, steps + 1)
    return [expm_hermitian_generator(h, t) @ root @ expm_hermitian_generator(ht, -t) for t in times]


def eigenbasis_transpose(v, rho0) -> np.ndarray:
    """Transpose of ``v`` taken in the eigenbasis of ``rho0``.

    With ``y = eigenbasis_transpose(v, rho0)`` the purified state of
    :func:`purified_state` corresponds to the amplitude ``u sqrt(rho0) v``.
    """
    _, q = spectral_arrays(rho0)
    v = np.asarray(v, dtype=complex)
    return q @ (q.conj().T @ v @ q).T @ q.conj().T


def purified_state(rho0, u, y) -> PurifiedState:
    """``sum_k sqrt(l_k) (u|k>) (x) (y|k>)`` over the eigenpairs of ``rho0``."""
    rho0 = as_density(rho0)
    u = as_square(u, "u")
    y = as_square(y, "y")
    if u.shape != rho0.matrix.shape:
        raise DimensionMismatch("system unitary does not match rho0")
    lam, q = spectral_arrays(rho0)
    mat = (u @ q) * np.sqrt(lam) @ (y @ q).T
    return PurifiedState(u.shape[0], y.shape[0], mat.ravel())


def purified_overlap(rho0, u, y) -> PhaseResult:
    """Phase and visibility of ``<Psi_0|(u (x) y)|Psi_0>``."""
    rho0 = as_density(rho0)
    eye_a = np.eye(np.asarray(y).shape[0])
    psi0 = purified_state(rho0, np.eye(rho0.dim), eye_a)
    psi = purified_state(rho0, u, y)
    return PhaseResult.from_complex(psi0.overlap(psi))


# -- interferometric phase --------------------------------------------------


def relative_phase(rho0, u) -> PhaseResult:
    """``arg Tr(rho0 u)``: the phase shift under a uni-local ``u (x) 1``."""
    rho0 = as_density(rho0)
    u = as_square(u, "u")
    if u.shape != rho0.matrix.shape:
        raise DimensionMismatch("unitary does not match rho0")
    return PhaseResult.from_complex(complex(np.trace(rho0.matrix @ u)))


def _support(rho0):
    lam, q = spectral_arrays(rho0)
    keep = lam > 0
    lam, q = lam[keep], q[:, keep]
    if len(lam) > 1 and np.min(np.abs(np.diff(lam))) <= DEGENERACY_TOLERANCE:
        raise DegenerateSpectrum("interferometric phase is indeterminate for degenerate state")
    return lam, q


def interferometric_components(rho0, h, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues ``l_k > 0`` and ``nu_k exp(i beta_k)`` for each eigenvector."""
    rho0 = as_density(rho0)
    h = as_square(h, "H")
    lam, q = _support(rho0)
    u = expm_hermitian_generator(h, tau)
    diag_u = np.einsum("ik,ij,jk->k", q.conj(), u, q)
    diag_h = np.einsum("ik,ij,jk->k", q.conj(), h, q).real
    return lam, np.exp(1j * tau * diag_h) * diag_u


def interferometric_phase(rho0, h, tau: float) -> PhaseResult:
    """Interferometric mixed-state phase ``arg sum_k l_k nu_k exp(i beta_k)``.

    Each eigenvector of ``rho0`` with non-zero weight is parallel transported
    by removing its own dynamical phase ``tau <k|H|k>``. Raises
    :class:`DegenerateSpectrum` when two positive eigenvalues coincide.
    """
    lam, comps = interferometric_components(rho0, h, tau)
    return PhaseResult.from_complex(complex(np.sum(lam * comps)))


def interferometric_qubit(r: float, omega: float) -> float:
    """Closed form ``-arctan(r tan(omega/2))`` tracked continuously in ``omega``."""
    if r == 0:
        raise IndeterminatePhase("interferometric phase is indeterminate for degenerate state")
    if not 0 < r <= 1:
        raise ValidationError(f"r must lie in (0, 1], got {r}")
    return wrap_phase(math.atan2(-r * math.sin(omega / 2), math.cos(omega / 2)))


# -- qubit closed forms --------------------------------------------------------


def ancilla_axis(p: PrecessionParams) -> tuple[float, float, float]:
    """``(n~_x, n~_z, tau~)`` of the ancilla precession for a qubit scenario.

    When ``1 - r^2 n_x^2`` vanishes the ancilla does not move; the axis is
    then arbitrary and ``(0, 1, 0)`` is returned.
    """
    shrink = math.sqrt(max(0.0, 1.0 - (p.r * p.n_x) ** 2))
    if shrink == 0.0:
        return 0.0, 1.0, 0.0
    ntx = math.sqrt(1.0 - p.r**2) * p.n_x / shrink
    ntz = p.n_z / shrink
    return ntx, ntz, p.tau * shrink


def _uhlmann_qubit_terms(p: PrecessionParams) -> tuple[float, float]:
    # the arctan argument of the noncyclic formula multiplied through by
    # cos(tau/2) cos(tau~/2): (numerator, denominator) of the exact overlap
    ntx, ntz, tau_t = ancilla_axis(p)
    c, s = math.cos(p.tau / 2), math.sin(p.tau / 2)
    ct, st = math.cos(tau_t / 2), math.sin(tau_t / 2)
    num = p.r * (ntz * c * st - p.n_z * s * ct)
    den = c * ct + s * st * (p.n_z * ntz + math.sqrt(1.0 - p.r**2) * p.n_x * ntx)
    return num, den


def uhlmann_qubit_visibility(p: PrecessionParams) -> float:
    return math.hypot(*_uhlmann_qubit_terms(p))


def uhlmann_qubit_noncyclic(p: PrecessionParams) -> float:
    """Noncyclic Uhlmann phase of a precessing qubit, in (-pi, pi].

    Equals ``-arctan((r n_z tan(tau/2) - r n~_z tan(tau~/2)) /
    (1 + (n_z n~_z + sqrt(1-r^2) n_x n~_x) tan(tau/2) tan(tau~/2)))`` on the
    branch selected by the signs of the overlap, i.e. the two-argument
    arctangent of the cleared numerator and denominator.
    """
    num, den = _uhlmann_qubit_terms(p)
    if math.hypot(num, den) < VISIBILITY_FLOOR:
        raise IndeterminatePhase("Uhlmann phase undefined: visibility vanishes")
    return wrap_phase(math.atan2(num, den))


def uhlmann_qubit_cyclic(r: float, n_x: float, nz_sign: float = 1.0) -> float:
    """Cyclic (``tau = 2 pi``) Uhlmann phase of a precessing qubit.

    ``arctan(r n_z / a * tan(pi a))`` with ``a = sqrt(1 - r^2 n_x^2)``,
    evaluated on the branch of the actual overlap ``-(cos(pi a) + i r n_z
    sin(pi a) / a)``.
    """
    if not 0 <= r <= 1 or abs(n_x) > 1:
        raise ValidationError("need 0 <= r <= 1 and |n_x| <= 1")
    n_z = math.copysign(math.sqrt(max(0.0, 1.0 - n_x * n_x)), nz_sign)
    a = math.sqrt(max(0.0, 1.0 - (r * n_x) ** 2))
    num = -r * n_z * math.pi * float(np.sinc(a))
    den = -math.cos(math.pi * a)
    if math.hypot(num, den) < VISIBILITY_FLOOR:
        raise IndeterminatePhase("Uhlmann phase undefined: visibility vanishes")
    return wrap_phase(math.atan2(num, den))


def _unwrapped_arctan(n_z: float, tau: float) -> float:
    # arg(cos(tau/2) + i n_z sin(tau/2)) followed continuously from tau = 0,
    # i.e. arctan(n_z tan(tau/2)) + pi * (number of tan branch crossings);
    # n_z = 0 is assigned the n_z -> 0+ branch
    half = tau / 2
    sign = 1.0 if n_z >= 0 else -1.0
    anchor = sign * math.pi * math.floor(half / math.pi + 0.5)
    principal = math.atan2(n_z * math.sin(half), math.cos(half))
    return principal + 2 * math.pi * round((anchor - principal) / (2 * math.pi))


def solid_angle_precession(n_z: float, tau: float) -> float:
    """Geodesically closed solid angle swept by ``|0>`` precessing about ``n``.

    Continuous in ``tau``; ``tau = 2 pi`` gives ``2 pi (1 - n_z)`` for
    ``n_z >= 0`` (and the same value minus ``4 pi`` for ``n_z < 0``).
    """
    if abs(n_z) > 1:
        raise ValidationError("|n_z| must not exceed 1")
    return 2.0 * _unwrapped_arctan(n_z, tau) - tau * n_z


def pure_qubit_noncyclic(n_z: float, tau: float) -> float:
    """Pure-state noncyclic phase ``-arctan(n_z tan(tau/2)) + tau n_z / 2 mod 2 pi``."""
    return wrap_phase(-0.5 * solid_angle_precession(n_z, tau))


# -- parallelity diagnostics ---------------------------------------------------


def check_uhlmann_parallel(amplitudes: Sequence, dt: float) -> float:
    """Max anti-Hermitian part of ``w_j^dag (w_{j+1} - w_j) / dt`` along a lift."""
    ws = [np.asarray(getattr(w, "matrix", w), dtype=complex) for w in amplitudes]
    if len(ws) < 2:
        raise ValidationError("need at least two amplitudes")
    worst = 0.0
    for a, b in zip(ws[:-1], ws[1:]):
        gen = a.conj().T @ (b - a) / dt
        worst = max(worst, float(np.max(np.abs(gen - gen.conj().T))))
    return worst


def check_standard_parallel(rho0, u_path: Sequence, y_path: Sequence, dt: float) -> float:
    """Max ``|Im <Psi_j|Psi_{j+1}>| / dt`` for ``Psi_j = (u_j (x) y_j) Psi_0``."""
    if len(u_path) != len(y_path) or len(u_path) < 2:
        raise ValidationError("u and y paths must have equal length >= 2")
    rho0 = as_density(rho0)
    psis = [purified_state(rho0, u, y).amplitudes for u, y in zip(u_path, y_path)]
    return max(abs(np.vdot(a, b).imag) / dt for a, b in zip(psis[:-1], psis[1:]))


def interferometric_discrete(rho0, h, tau: float, steps: int) -> PhaseResult:
    """Interferometric phase with each ``beta_k`` from a sampled Bargmann product."""
    rho0 = as_density(rho0)
    lam, q = _support(rho0)
    us = np.stack(unitary_path(h, tau, steps))
    total = 0.0 + 0.0j
    for weight, ket in zip(lam, q.T):
        ray = us @ ket
        beta = pancharatnam_phase(list(ray))
        if not beta.phase_defined:
            return PhaseResult(float("nan"), 0.0, False)
        nu = abs(np.vdot(ket, ray[-1]))
        total += weight * nu * np.exp(1j * beta.phase)
    return PhaseResult.from_complex(total)
