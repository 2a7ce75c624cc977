"""Bloch-Redfield master equation for per-site Ohmic dephasing baths.

Each site couples through its sigma_z to an independent Ohmic bath with
spectral density J(w) = (pi/2) * alpha * w * exp(-w / cutoff), extended oddly
to negative frequencies.  The one-sided bath correlation spectrum is

    G(w) = 2 N(w) J(w),   N(w) = 1 / (e^{beta w} - 1),

so G(0) = pi * alpha / beta and G(-w) = 2 (N(w) + 1) J(w) for w > 0
(detailed balance: G(-w) / G(w) = e^{beta w}).

The generator is built in the system eigenbasis from filtered coupling
operators: with A_i the eigenbasis matrix of sigma_z at site i and

    Lambda_i[n, c] = A_i[n, c] * 1/2 G(w_n - w_c)          (w_a = E_a)

the non-secular dissipator is

    D(rho) = sum_i (A_i rho Lambda_i^dag + Lambda_i rho A_i
                    - A_i Lambda_i rho - rho Lambda_i^dag A_i),

which is exactly trace preserving for any Lambda_i.  The dense rank-4 tensor
R_abcd with d rho_ab / dt |_dissipative = -sum_cd R_abcd rho_cd is exported
for audits; the integrator uses the operator form directly (D^2 scaling per
right-hand side instead of D^4).

An optional Lamb-shift correction adds the imaginary (principal-value) part
of the half-range correlation integral to Lambda; it is off by default.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp

from .dynamics import Spectrum, spectrum as make_spectrum
from .hilbert import SZ, DimensionError, QuantumState, operator_on

MAX_DIM = 64  # rank-4 tensor is O(D^4); 6 qubits covers every study here


@dataclass(frozen=True)
class BathSpec:
    """Ohmic bath: coupling alpha, inverse temperature beta, cutoff w_C."""

    alpha: float
    inv_temperature: float = 10.0
    cutoff: float = 1e4

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.inv_temperature <= 0:
            raise ValueError("inv_temperature must be positive")
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")


@dataclass(frozen=True)
class RedfieldTensor:
    """Dissipative generator over the system eigenbasis.

    lambdas holds one filtered coupling operator per bathed site; tensor()
    materializes the rank-4 R_abcd on demand.
    """

    spectrum: Spectrum
    couplings: tuple[np.ndarray, ...] = field(repr=False)
    lambdas: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.spectrum.dim

    def bohr_frequencies(self) -> np.ndarray:
        E = self.spectrum.eigenvalues
        return E[:, None] - E[None, :]

    def dissipator(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho)
        for A, L in zip(self.couplings, self.lambdas):
            out += A @ rho @ L.conj().T + L @ rho @ A
            out -= (A @ L) @ rho + rho @ (L.conj().T @ A)
        return out

    def tensor(self) -> np.ndarray:
        """Rank-4 R_abcd with d rho_ab/dt = -sum_cd R_abcd rho_cd."""
        D = self.dim
        eye = np.eye(D)
        R = np.zeros((D, D, D, D), dtype=complex)
        for A, L in zip(self.couplings, self.lambdas):
            R -= np.einsum("ac,bd->abcd", A, L.conj())
            R -= np.einsum("ac,bd->abcd", L, A.conj())
            R += np.einsum("ac,bd->abcd", A @ L, eye)
            R += np.einsum("ac,bd->abcd", eye, (L.conj().T @ A).T)
        return R


def bath_spectrum(omega, bath: BathSpec):
    """One-sided correlation spectrum G(w); scalar or array frequencies."""
    w = np.asarray(omega, dtype=float)
    beta, wc = bath.inv_temperature, bath.cutoff
    aw = np.abs(w)
    J = 0.5 * np.pi * bath.alpha * aw * np.exp(-aw / wc)
    with np.errstate(over="ignore"):
        expm = np.expm1(beta * aw)
    # N(|w|) J(|w|): emission side; absorption adds the extra J(|w|)
    small = aw < 1e-12
    occ = np.where(small, 0.0, np.divide(J, expm, where=~small))
    G = 2.0 * occ + np.where(w < 0, 2.0 * J, 0.0)
    G = np.where(small, np.pi * bath.alpha / beta, G)
    return float(G) if np.isscalar(omega) else G


def _lamb_kernel(omega: float, bath: BathSpec) -> float:
    """Principal-value part S(w) = (1/2pi) P int dw' G(w') / (w - w')."""
    span = 50.0 * bath.cutoff

    def num(wp):
        return bath_spectrum(wp, bath) / (2.0 * np.pi)

    if abs(omega) < 1e-12:
        val, _ = quad(lambda wp: (num(omega + wp) - num(omega - wp)) / wp,
                      1e-10, span, limit=400)
        return -val
    val, _ = quad(num, -span, span, weight="cauchy", wvar=omega,
                  limit=400, points=None)
    return val


def build_tensor(H_S, sites, baths, lamb_shift: bool = False) -> RedfieldTensor:
    """Redfield generator for sigma_z couplings at the given sites.

    H_S may be a matrix or a precomputed Spectrum; baths is one BathSpec per
    site (or a single BathSpec shared by all).
    """
    spec = H_S if isinstance(H_S, Spectrum) else make_spectrum(np.asarray(H_S))
    D = spec.dim
    if D > MAX_DIM:
        raise DimensionError(f"Redfield restricted to dimension <= {MAX_DIM}")
    n = int(round(np.log2(D)))
    if 2 ** n != D:
        raise DimensionError("dimension must be a power of two")
    sites = list(sites)
    if isinstance(baths, BathSpec):
        baths = [baths] * len(sites)
    if len(baths) != len(sites):
        raise ValueError("need one bath per coupled site")
    V = spec.eigenvectors
    # Lambda[n, c] filters A[n, c] with G at w_nc = E_n - E_c: a downhill
    # transition (E_c > E_n) picks the emission side G(w < 0) = 2(N+1)J,
    # so detailed balance drives populations toward the Gibbs weights.
    omegas = spec.eigenvalues[:, None] - spec.eigenvalues[None, :]
    gaps = np.abs(omegas) + np.eye(D)
    couplings, lambdas = [], []
    for site, bath in zip(sites, baths):
        A = V.conj().T @ operator_on(n, {site: SZ}) @ V
        if (gaps < 1e-12).any():
            off = np.abs(A)[(gaps < 1e-12) & ~np.eye(D, dtype=bool)]
            if off.size and off.max() > 1e-10:
                warnings.warn(
                    "degenerate eigenbasis with non-diagonal coupling blocks; "
                    "the Redfield tensor depends on the basis choice inside "
                    "the degenerate subspace",
                    stacklevel=2,
                )
        half = 0.5 * bath_spectrum(omegas, bath)
        if lamb_shift:
            shift = np.vectorize(lambda w: _lamb_kernel(w, bath))(omegas)
            half = half + 1j * shift
        couplings.append(A)
        lambdas.append(A * half)
    return RedfieldTensor(spec, tuple(couplings), tuple(lambdas))


def evolve_master(rho0: QuantumState, H_S, tensor: RedfieldTensor,
                  t: float, tol: float = 1e-8,
                  t_eval=None):
    """Integrate d rho/dt = -i[H_S, rho] + D(rho) up to time t.

    Works in the eigenbasis (the coherent part is then diagonal phases).
    Returns the final QuantumState, or a list of states at t_eval times.
    """
    spec = tensor.spectrum
    D = spec.dim
    if rho0.kind != "mixed":
        rho0 = QuantumState.mixed(rho0.density_matrix())
    if rho0.data.shape[0] != D:
        raise DimensionError("state and tensor dimensions differ")
    V = spec.eigenvectors
    omegas = spec.eigenvalues[:, None] - spec.eigenvalues[None, :]
    rho_eig = V.conj().T @ rho0.data @ V

    def rhs(_t, y):
        rho = y.reshape(D, D)
        drho = -1j * omegas * rho + tensor.dissipator(rho)
        return drho.ravel()

    sol = solve_ivp(rhs, (0.0, t), rho_eig.ravel().astype(complex),
                    method="RK45", rtol=tol, atol=tol * 1e-2,
                    t_eval=t_eval, dense_output=False)
    if not sol.success:
        raise RuntimeError(f"integrator failed at t={sol.t[-1]}: {sol.message}")

    def repack(y):
        rho = y.reshape(D, D)
        rho = V @ rho @ V.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-6:
            raise RuntimeError(f"trace drifted to {tr}")
        evals = np.linalg.eigvalsh(rho)
        if evals.min() < -1e-4:
            warnings.warn(
                f"Redfield state eigenvalue {evals.min():.2e} < -1e-4 "
                "(Redfield does not guarantee positivity)", stacklevel=2)
        n = int(round(np.log2(D)))
        return QuantumState("mixed", _scrub(rho), n)

    if t_eval is None:
        return repack(sol.y[:, -1])
    return [repack(sol.y[:, k]) for k in range(sol.y.shape[1])]


def _scrub(rho: np.ndarray) -> np.ndarray:
    """Project onto the physical cone just enough to satisfy validation.

    Redfield evolution can produce tiny negative eigenvalues; clip them and
    renormalize the trace (a no-op when the state is already physical).
    """
    w, U = np.linalg.eigh(rho)
    if w.min() >= 0.0:
        return rho
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    return (U * w) @ U.conj().T
