"""Tensor-product state and operator algebra for qubit registers.

Provides the QuantumState container (pure vectors and density matrices),
composition, single-site operator embedding, partial trace, fidelity, and the
one-hot logical-qudit embedding.  Site 0 is the most significant bit of the
computational basis index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Largest register accepted anywhere; fails fast on misconfiguration.
MAX_SITES = 24

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SPLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |1> -> |0>
SMINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |0> -> |1>
ID2 = np.eye(2, dtype=complex)

_AXIS_MATRICES = {"x": SX, "y": SY, "z": SZ, "plus": SPLUS, "minus": SMINUS}


class DimensionError(ValueError):
    """Raised on register-size overflow or operand dimension mismatch."""


@dataclass(frozen=True)
class BlochInput:
    """A pure qubit state parametrized by Bloch angles.

    theta in [0, pi], phi in [0, 2*pi).  theta = pi/2 is an equatorial state.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    @property
    def equatorial(self) -> bool:
        return abs(self.theta - np.pi / 2.0) < 1e-14

    def amplitudes(self) -> np.ndarray:
        """Return (alpha, beta) = (cos(theta/2), e^{i phi} sin(theta/2))."""
        return np.array(
            [np.cos(self.theta / 2.0),
             np.exp(1j * self.phi) * np.sin(self.theta / 2.0)],
            dtype=complex,
        )


@dataclass(frozen=True)
class SiteOperator:
    """A single-site Pauli or ladder operator acting on one register site."""

    site: int
    axis: str

    def __post_init__(self):
        if self.axis not in _AXIS_MATRICES:
            raise ValueError(f"unknown axis {self.axis!r}")
        if self.site < 0:
            raise ValueError("site must be non-negative")

    def matrix(self) -> np.ndarray:
        return _AXIS_MATRICES[self.axis]


@dataclass(frozen=True)
class QuantumState:
    """A pure state vector or density matrix over n_sites qubits."""

    kind: str  # "pure" | "mixed"
    data: np.ndarray = field(repr=False)
    n_sites: int

    def __post_init__(self):
        if self.n_sites > MAX_SITES:
            raise DimensionError(
                f"register of {self.n_sites} sites exceeds the cap of {MAX_SITES}"
            )
        dim = 2 ** self.n_sites
        arr = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", arr)
        if self.kind == "pure":
            if arr.shape != (dim,):
                raise DimensionError(f"pure state must have shape ({dim},)")
            norm = float(np.sum(np.abs(arr) ** 2))
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"pure state not normalized: |psi|^2 = {norm}")
        elif self.kind == "mixed":
            if arr.shape != (dim, dim):
                raise DimensionError(f"density matrix must have shape ({dim},{dim})")
            if np.abs(arr - arr.conj().T).max() > 1e-12:
                raise ValueError("density matrix is not Hermitian")
            tr = complex(np.trace(arr))
            if abs(tr - 1.0) > 1e-12:
                raise ValueError(f"density matrix trace is {tr}, expected 1")
            evals = np.linalg.eigvalsh(arr)
            if evals.min() < -1e-10:
                raise ValueError(f"density matrix has eigenvalue {evals.min()}")
        else:
            raise ValueError(f"kind must be 'pure' or 'mixed', got {self.kind!r}")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def pure(amplitudes: np.ndarray) -> "QuantumState":
        amplitudes = np.asarray(amplitudes, dtype=complex)
        n = int(round(np.log2(amplitudes.size)))
        if 2 ** n != amplitudes.size:
            raise DimensionError("amplitude vector length must be a power of 2")
        return QuantumState("pure", amplitudes, n)

    @staticmethod
    def mixed(matrix: np.ndarray) -> "QuantumState":
        matrix = np.asarray(matrix, dtype=complex)
        n = int(round(np.log2(matrix.shape[0])))
        if matrix.ndim != 2 or 2 ** n != matrix.shape[0]:
            raise DimensionError("density matrix dimension must be a power of 2")
        return QuantumState("mixed", matrix, n)

    @staticmethod
    def basis(n_sites: int, excited: tuple[int, ...] = ()) -> "QuantumState":
        """Computational basis state with the listed sites in |1>."""
        vec = np.zeros(2 ** n_sites, dtype=complex)
        vec[basis_index(n_sites, excited)] = 1.0
        return QuantumState("pure", vec, n_sites)

    @staticmethod
    def bloch(inp: BlochInput) -> "QuantumState":
        return QuantumState("pure", inp.amplitudes(), 1)

    @staticmethod
    def maximally_mixed(n_sites: int) -> "QuantumState":
        dim = 2 ** n_sites
        return QuantumState("mixed", np.eye(dim, dtype=complex) / dim, n_sites)

    # -- views ------------------------------------------------------------

    def density_matrix(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return self.data


def basis_index(n_sites: int, excited: tuple[int, ...]) -> int:
    """Index of the basis state with the given sites excited (site 0 = MSB)."""
    idx = 0
    for site in excited:
        if not 0 <= site < n_sites:
            raise DimensionError(f"site {site} outside register of {n_sites}")
        idx |= 1 << (n_sites - 1 - site)
    return idx


def compose(states: list[QuantumState]) -> QuantumState:
    """Tensor product of states in listed site order.

    The product is pure iff every factor is pure; any mixed factor promotes
    the result to a density matrix.
    """
    if not states:
        raise ValueError("compose requires at least one state")
    n_total = sum(s.n_sites for s in states)
    if n_total > MAX_SITES:
        raise DimensionError(
            f"composed register of {n_total} sites exceeds the cap of {MAX_SITES}"
        )
    if all(s.kind == "pure" for s in states):
        vec = states[0].data
        for s in states[1:]:
            vec = np.kron(vec, s.data)
        return QuantumState("pure", vec, n_total)
    mat = states[0].density_matrix()
    for s in states[1:]:
        mat = np.kron(mat, s.density_matrix())
    return QuantumState("mixed", mat, n_total)


def operator_on(n_sites: int, factors: dict[int, np.ndarray]) -> np.ndarray:
    """Embed single-site operators at the given sites into the full register."""
    mat = np.array([[1.0]], dtype=complex)
    for site in range(n_sites):
        mat = np.kron(mat, factors.get(site, ID2))
    return mat


def site_operator(n_sites: int, op: SiteOperator) -> np.ndarray:
    """Full-register matrix of a single-site Pauli/ladder operator."""
    if op.site >= n_sites:
        raise DimensionError(f"site {op.site} outside register of {n_sites}")
    return operator_on(n_sites, {op.site: op.matrix()})


def partial_trace(state: QuantumState, keep: set[int]) -> QuantumState:
    """Reduced density matrix on the kept sites (in ascending site order)."""
    keep_sorted = sorted(keep)
    if not keep_sorted:
        raise ValueError("keep must be a nonempty set of sites")
    if any(s < 0 or s >= state.n_sites for s in keep_sorted):
        raise DimensionError("keep contains sites outside the register")
    n = state.n_sites
    traced = [s for s in range(n) if s not in keep]
    if state.kind == "pure":
        psi = state.data.reshape([2] * n)
        psi = np.transpose(psi, keep_sorted + traced)
        psi = psi.reshape(2 ** len(keep_sorted), -1)
        rho = psi @ psi.conj().T
    else:
        rho_full = state.data.reshape([2] * (2 * n))
        order = keep_sorted + traced
        perm = order + [n + s for s in order]
        rho_full = np.transpose(rho_full, perm)
        dk = 2 ** len(keep_sorted)
        dt = 2 ** len(traced)
        rho_full = rho_full.reshape(dk, dt, dk, dt)
        rho = np.einsum("atbt->ab", rho_full)
    rho = 0.5 * (rho + rho.conj().T)  # scrub numerical asymmetry
    return QuantumState("mixed", rho, len(keep_sorted))


def fidelity(rho: QuantumState, psi: QuantumState) -> float:
    """Overlap <psi|rho|psi> between a mixed state and a pure reference."""
    if rho.n_sites != psi.n_sites:
        raise DimensionError("fidelity operands have different register sizes")
    if psi.kind != "pure":
        raise ValueError("reference state must be pure")
    vec = psi.data
    val = vec.conj() @ rho.density_matrix() @ vec
    if abs(val.imag) > 1e-12:
        raise ValueError(f"fidelity has spurious imaginary part {val.imag}")
    return float(np.clip(val.real, 0.0, 1.0))


def embed_qudit(d: int, amplitudes: np.ndarray) -> QuantumState:
    """One-hot embedding of a d-level state into d qubits.

    Level i maps to the basis state with qubit (d-1-i) excited, so level 0 is
    |0...01>, level 1 is |0...10>, and so on.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (d,):
        raise DimensionError(f"expected {d} amplitudes")
    norm = float(np.sum(np.abs(amplitudes) ** 2))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"amplitudes not normalized: {norm}")
    vec = np.zeros(2 ** d, dtype=complex)
    for level in range(d):
        vec[basis_index(d, (d - 1 - level,))] = amplitudes[level]
    return QuantumState("pure", vec, d)
