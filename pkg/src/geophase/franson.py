"""Two-photon Franson interferometer with polarization-entangled photons.

The source emits ``sqrt((1+r)/2)|HH> + sqrt((1-r)/2)|VV>``. The long arms
apply ``u_tau`` to the system photon and ``y_tau`` to the ancilla photon;
a U(1) shift ``chi`` sits in a short arm. Coincidences interfere the
short-short and long-long amplitudes, giving the fringe
``1 + nu cos(chi - phi)`` with ``nu exp(i phi) = <Psi_0|u (x) y|Psi_0>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedFit, ValidationError
from .evolution import (
    WaveplateParams,
    ancilla_branch_flag,
    ancilla_waveplate_params,
    waveplate_unitary,
)
from .holonomy import PhaseResult, PurifiedState, _support, purified_state
from .numerics import _require_hermitian, as_square, expm_hermitian_generator
from .states import as_density, spectral_arrays


@dataclass(frozen=True, eq=False)
class FransonConfig:
    r: float
    plate: WaveplateParams
    chi_grid: np.ndarray
    samples_per_point: int = 1
    seed: int = 0

    def __post_init__(self):
        chi = np.asarray(self.chi_grid, dtype=float)
        if chi.size == 0:
            raise ValidationError("chi grid is empty")
        if np.any(chi < 0) or np.any(chi >= 2 * np.pi) or np.any(np.diff(chi) <= 0):
            raise ValidationError("chi grid must be ascending within [0, 2 pi)")
        if not 0.0 <= self.r <= 1.0:
            raise ValidationError(f"r must lie in [0, 1], got {self.r}")
        if self.samples_per_point < 1:
            raise ValidationError("samples_per_point must be positive")
        object.__setattr__(self, "chi_grid", chi)


@dataclass(frozen=True, eq=False)
class FringeScan:
    chi: np.ndarray
    intensity: np.ndarray
    flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=float)
        intensity = np.asarray(self.intensity, dtype=float)
        if chi.shape != intensity.shape:
            raise ValidationError("chi and intensity must have equal length")
        if np.any(intensity < 0):
            raise ValidationError("intensities must be non-negative")
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "intensity", intensity)


def chi_grid(points: int) -> np.ndarray:
    """``points`` equally spaced shifts covering [0, 2 pi)."""
    if points < 1:
        raise ValidationError("need at least one chi point")
    return 2 * np.pi * np.arange(points) / points


def entangled_source(r: float) -> PurifiedState:
    """Schmidt-form photon pair in the H-V basis (``|H> = e_1``)."""
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    amps = np.array([math.sqrt((1 + r) / 2), 0.0, 0.0, math.sqrt((1 - r) / 2)], dtype=complex)
    return PurifiedState(2, 2, amps)


def franson_unitaries(plate: WaveplateParams, r: float) -> tuple[np.ndarray, np.ndarray]:
    """System plate ``u(alpha, theta)`` and ancilla plate ``u^dag(alpha~, theta~)``."""
    u = waveplate_unitary(plate)
    y = waveplate_unitary(ancilla_waveplate_params(plate, r)).conj().T
    return u, y


def bilocal_overlap(psi0: PurifiedState, u, y) -> complex:
    """``<Psi_0|u (x) y|Psi_0>``."""
    evolved = np.kron(u, y) @ psi0.amplitudes
    return complex(np.vdot(psi0.amplitudes, evolved))


def _fringe(psi0: np.ndarray, psi_tau: np.ndarray, chi: np.ndarray) -> np.ndarray:
    # |Psi> ~ exp(i chi) Psi_0 + Psi_tau, normalized so the mean rate is 1
    superposed = np.exp(1j * chi)[:, None] * psi0[None, :] + psi_tau[None, :]
    return 0.5 * np.sum(np.abs(superposed) ** 2, axis=1)


def _sample(ideal: np.ndarray, samples: int, seed: int) -> np.ndarray:
    if samples == 1:
        return ideal
    # one child stream per grid point so the result does not depend on order
    children = np.random.SeedSequence(seed).spawn(len(ideal))
    counts = [np.random.default_rng(c).poisson(samples * lam) for c, lam in zip(children, ideal)]
    return np.asarray(counts, dtype=float) / samples


def coincidence_fringe(cfg: FransonConfig) -> FringeScan:
    """Coincidence intensity versus ``chi`` for the bi-local Uhlmann plates."""
    source = entangled_source(cfg.r)
    u, y = franson_unitaries(cfg.plate, cfg.r)
    evolved = np.kron(u, y) @ source.amplitudes
    ideal = _fringe(source.amplitudes, evolved, cfg.chi_grid)
    flags = ("ancilla_theta_branch_convention",) if ancilla_branch_flag(cfg.plate.theta) and 0 < cfg.r < 1 else ()
    return FringeScan(cfg.chi_grid, _sample(ideal, cfg.samples_per_point, cfg.seed), flags)


def fit_fringe(scan: FringeScan, floor: float = 1e-8) -> PhaseResult:
    """Least-squares fit of ``a (1 + nu cos(chi - phi))`` to a fringe scan."""
    chi = scan.chi
    if len(np.unique(chi)) < 3:
        raise IllConditionedFit("need at least three distinct chi values")
    design = np.column_stack([np.ones_like(chi), np.cos(chi), np.sin(chi)])
    sv = np.linalg.svd(design, compute_uv=False)
    if sv[-1] < 1e-8 * sv[0]:
        raise IllConditionedFit("chi values do not determine the fringe")
    (a, b, c), *_ = np.linalg.lstsq(design, scan.intensity, rcond=None)
    if a <= 0:
        raise IllConditionedFit("fitted mean intensity is not positive")
    return PhaseResult.from_complex(complex(b, c) / a, floor=floor, flags=scan.flags)


def cyclic_visibility(r: float, theta: float) -> float:
    """Fringe visibility for ``alpha = 2 pi``.

    ``sqrt(cos^2(pi a) + r^2 cos^2(2 theta) sin^2(pi a) / a^2)`` with
    ``a = sqrt(1 - r^2 sin^2 2theta)``; the ``a -> 0`` limit is finite.
    """
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    a = math.sqrt(max(0.0, 1.0 - (r * math.sin(2 * theta)) ** 2))
    # sin(pi a) / a == pi * sinc(a)
    second = r * math.cos(2 * theta) * math.pi * float(np.sinc(a))
    return min(1.0, math.hypot(math.cos(math.pi * a), second))


def compensation_unitary(rho0, h, tau: float) -> np.ndarray:
    """``exp(+i tau D)`` with ``D = sum_k <k|H|k> |k><k|`` over the eigenbasis of ``rho0``."""
    rho0 = as_density(rho0)
    h = as_square(h, "H")
    _require_hermitian(h, None)
    _support(rho0)  # degenerate states have no unique compensation
    _, q = spectral_arrays(rho0)
    diag = np.einsum("ik,ij,jk->k", q.conj(), h, q).real
    return expm_hermitian_generator(q @ np.diag(diag) @ q.conj().T, -tau)


def single_photon_phi_test(rho0, h, tau: float, chi) -> tuple[FringeScan, PhaseResult]:
    """Single-photon interferometer whose fringe phase is the interferometric phase.

    One arm carries ``c_tau u_tau`` where ``c_tau`` cancels the dynamical phase
    of each eigenvector of ``rho0``; the other arm is empty. The mixed input
    is represented by its purification with an idle ancilla.
    """
    rho0 = as_density(rho0)
    c = compensation_unitary(rho0, h, tau)
    u = expm_hermitian_generator(h, tau)
    eye = np.eye(rho0.dim)
    psi0 = purified_state(rho0, eye, eye).amplitudes
    psi_tau = purified_state(rho0, c @ u, eye).amplitudes
    chi = np.asarray(chi, dtype=float)
    scan = FringeScan(chi, _fringe(psi0, psi_tau, chi))
    return scan, fit_fringe(scan)
