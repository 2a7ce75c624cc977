"""Exact evolution via eigendecomposition, plus closed-form star coefficients.

The Hamiltonians built by this package conserve total sigma_z, so the
spectrum helper diagonalizes excitation-number blocks independently and
reassembles a full spectrum; long scans reuse one decomposition for every
time point, and phases are computed directly as e^{-i E t} so large t incurs
no accumulation error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import DimensionError, QuantumState
from .network import excitation_number


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition H = V diag(E) V^dagger."""

    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def propagator_phases(self, t: float) -> np.ndarray:
        return np.exp(-1j * self.eigenvalues * t)


def spectrum(H: np.ndarray) -> Spectrum:
    """Diagonalize a Hermitian matrix, blocking by excitation number when the
    matrix is block diagonal in it (true for every Hamiltonian assembled by
    this package)."""
    H = np.asarray(H, dtype=complex)
    dim = H.shape[0]
    if H.shape != (dim, dim):
        raise DimensionError("Hamiltonian must be square")
    if np.abs(H - H.conj().T).max() > 1e-12 * max(1.0, np.abs(H).max()):
        raise ValueError("Hamiltonian is not Hermitian")
    n = int(round(np.log2(dim)))
    if 2 ** n != dim:
        return _full_spectrum(H)
    counts = excitation_number(n)
    # Verify block structure; fall back to a plain dense eigh otherwise.
    scale = max(1.0, np.abs(H).max())
    for k in range(n + 1):
        sel = counts == k
        if np.abs(H[np.ix_(sel, ~sel)]).max(initial=0.0) > 1e-12 * scale:
            return _full_spectrum(H)
    evals = np.zeros(dim)
    evecs = np.zeros((dim, dim), dtype=complex)
    for k in range(n + 1):
        idx = np.nonzero(counts == k)[0]
        w, v = np.linalg.eigh(H[np.ix_(idx, idx)])
        evals[idx] = w
        evecs[np.ix_(idx, idx)] = v
    order = np.argsort(evals, kind="stable")
    return Spectrum(evals[order], evecs[:, order])


def _full_spectrum(H: np.ndarray) -> Spectrum:
    w, v = np.linalg.eigh(H)
    return Spectrum(w, v)


def evolve(H, state: QuantumState, t: float) -> QuantumState:
    """Evolve a state for time t: psi -> e^{-iHt} psi, rho -> U rho U^dagger.

    H may be a Hermitian matrix or a precomputed Spectrum.
    """
    spec = H if isinstance(H, Spectrum) else spectrum(H)
    if spec.dim != 2 ** state.n_sites:
        raise DimensionError("Hamiltonian and state dimensions differ")
    V = spec.eigenvectors
    phases = spec.propagator_phases(t)
    if state.kind == "pure":
        psi = V @ (phases * (V.conj().T @ state.data))
        return QuantumState("pure", psi, state.n_sites)
    rho_eig = V.conj().T @ state.data @ V
    rho_eig = rho_eig * np.outer(phases, phases.conj())
    rho = V @ rho_eig @ V.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return QuantumState("mixed", rho, state.n_sites)


def evolve_amplitudes(spec: Spectrum, psi0: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Vectorized evolution of one pure vector over many times.

    Returns an array of shape (dim, len(ts)) with column j = e^{-iH t_j} psi0.
    """
    coeffs = spec.eigenvectors.conj().T @ psi0
    phases = np.exp(-1j * np.outer(spec.eigenvalues, np.asarray(ts)))
    return spec.eigenvectors @ (phases * coeffs[:, None])


@dataclass(frozen=True)
class StarCoefficients:
    """Source and total-blank amplitudes of the one-excitation star dynamics.

    The state (up to a global phase) is
    alpha|0...0> + beta1|source excited> + (beta2/sqrt(M)) sum_tips |tip excited>,
    so |beta1|^2 + |beta2|^2 = |beta|^2.
    """

    beta1: complex
    beta2: complex


def star_coeffs_heisenberg(M: int, beta: complex, t: float) -> StarCoefficients:
    """Closed-form star amplitudes for the isotropic (lambda=1) model at B=0.

    With S = M/2:
      beta1 = beta (2S e^{i(1/2+S)t} + 1) / (1+2S)
      beta2 = beta sqrt(2S) (1 - e^{i(1/2+S)t}) / (1+2S)
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    S = M / 2.0
    phase = np.exp(1j * (0.5 + S) * t)
    beta1 = beta * (2.0 * S * phase + 1.0) / (1.0 + 2.0 * S)
    beta2 = beta * np.sqrt(2.0 * S) * (1.0 - phase) / (1.0 + 2.0 * S)
    return StarCoefficients(complex(beta1), complex(beta2))


def star_coeffs_xy(M: int, beta: complex, B: float, t: float) -> StarCoefficients:
    """Closed-form star amplitudes for the XY (lambda=0) model in field B.

      beta1 = beta e^{iBt} cos(sqrt(M) t / 2)
      beta2 = -i beta e^{iBt} sin(sqrt(M) t / 2)
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    phase = np.exp(1j * B * t)
    half = np.sqrt(M) * t / 2.0
    return StarCoefficients(
        complex(beta * phase * np.cos(half)),
        complex(-1j * beta * phase * np.sin(half)),
    )
