"""Gate-model cloning circuits, iSWAP-native compilation, and noisy runs.

The circuit family targets hardware whose native two-qubit gate is the iSWAP
(the XY interaction H = -J(XX + YY) left on for Jt = pi/4).  CNOTs are
compiled into two iSWAPs plus single-qubit rotations; controlled-Ry into two
CNOTs plus Ry rotations.  Single-qubit gates are treated as instantaneous;
only iSWAP segments take time (pi/4 each, J = 1), and during a noisy run
every qubit -- active or spectator -- dephases under its own Ohmic bath
while the segment Hamiltonian acts on the gated pair.

The 1 -> 2 cloner uses two wires (input + blank); the 1 -> 3 cloner uses
three.  Both produce every wire as a clone of an equatorial input: the
1 -> 3 preparation rotations are chosen so that the two blank wires come out
at fidelity 5/6 and the input wire carries the conjugate clone, which a
final X turns into a proper clone (sigma_x |psi*> is proportional to |psi>
for any equatorial |psi>).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import redfield
from .cloner import CloneTask, xy_optimum
from .dynamics import evolve
from .hilbert import (
    SX,
    SY,
    BlochInput,
    DimensionError,
    QuantumState,
    fidelity,
    operator_on,
    partial_trace,
)

ISWAP_DURATION = np.pi / 4.0

# 1 -> 3 preparation angles: through the Ry/CNOT preparation skeleton these
# produce the two-qubit state (|00> + |01> + |10>)/sqrt(3), the unique
# preparation for which all three output wires clone at 5/6.
THETA_1 = -0.5 * np.arctan(2.0)
THETA_2 = np.arctan((3.0 - np.sqrt(5.0)) / 2.0)
THETA_3 = THETA_1

_SINGLE = ("rx", "ry", "rz", "x")
_TWO = ("iswap", "cnot", "cry")


@dataclass(frozen=True)
class Gate:
    """One gate: kind, acted sites (control first for cnot/cry), angle."""

    kind: str
    sites: tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in _SINGLE + _TWO:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        want = 1 if self.kind in _SINGLE else 2
        if len(self.sites) != want:
            raise ValueError(f"{self.kind} acts on {want} site(s)")
        if len(set(self.sites)) != len(self.sites):
            raise ValueError("gate sites must be distinct")
        if not np.isfinite(self.angle):
            raise ValueError("gate angle must be finite")

    @property
    def duration(self) -> float:
        return ISWAP_DURATION if self.kind == "iswap" else 0.0

    def matrix(self) -> np.ndarray:
        a = self.angle
        c, s = np.cos(a / 2.0), np.sin(a / 2.0)
        if self.kind == "rx":
            return np.array([[c, -1j * s], [-1j * s, c]])
        if self.kind == "ry":
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == "rz":
            return np.diag([np.exp(-1j * a / 2.0), np.exp(1j * a / 2.0)])
        if self.kind == "x":
            return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        if self.kind == "iswap":
            return np.array(
                [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]],
                dtype=complex,
            )
        if self.kind == "cnot":
            return np.array(
                [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                dtype=complex,
            )
        # cry: controlled Ry(angle), control = first site
        out = np.eye(4, dtype=complex)
        out[2:, 2:] = np.array([[c, -s], [s, c]])
        return out


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over a fixed-width qubit register."""

    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            if any(s < 0 or s >= self.n_qubits for s in g.sites):
                raise ValueError(f"gate {g} outside register of {self.n_qubits}")

    @property
    def total_duration(self) -> float:
        return sum(g.duration for g in self.gates)

    def iswap_count(self) -> int:
        return sum(1 for g in self.gates if g.kind == "iswap")


def iswap_unitary() -> np.ndarray:
    """The native two-qubit gate; equals XY evolution at Jt = pi/4."""
    return Gate("iswap", (0, 1)).matrix()


def segment_hamiltonian(n: int, pair: tuple[int, int]) -> np.ndarray:
    """Register Hamiltonian during an iSWAP segment: H = -(XX + YY) on pair."""
    i, j = pair
    return -(operator_on(n, {i: SX, j: SX}) + operator_on(n, {i: SY, j: SY}))


def _embed(n: int, U: np.ndarray, sites: tuple[int, ...]) -> np.ndarray:
    """Lift a 1- or 2-site unitary to the full register (site 0 = MSB)."""
    if len(sites) == 1:
        return operator_on(n, {sites[0]: U})
    i, j = sites
    T = U.reshape(2, 2, 2, 2)  # (i_out, j_out, i_in, j_in)
    full = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for idx in range(2 ** n):
        bi = (idx >> (n - 1 - i)) & 1
        bj = (idx >> (n - 1 - j)) & 1
        base = idx & ~((1 << (n - 1 - i)) | (1 << (n - 1 - j)))
        for oi in range(2):
            for oj in range(2):
                out = base | (oi << (n - 1 - i)) | (oj << (n - 1 - j))
                full[out, idx] = T[oi, oj, bi, bj]
    return full


def unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit (gates applied in list order)."""
    U = np.eye(2 ** circuit.n_qubits, dtype=complex)
    for g in circuit.gates:
        U = _embed(circuit.n_qubits, g.matrix(), g.sites) @ U
    return U


def equal_up_to_phase(A: np.ndarray, B: np.ndarray, tol: float = 1e-12) -> bool:
    k = np.unravel_index(np.argmax(np.abs(B)), B.shape)
    if abs(A[k]) == 0.0:
        return False
    phase = B[k] / A[k]
    return abs(abs(phase) - 1.0) < tol and np.abs(A * phase - B).max() < tol


def _compile_cnot(control: int, target: int) -> list[Gate]:
    # iSWAP-native CNOT: rotations interleaved with two iSWAP segments.
    return [
        Gate("rx", (target,), np.pi / 2.0),
        Gate("rz", (control,), -np.pi / 2.0),
        Gate("rz", (target,), np.pi / 2.0),
        Gate("iswap", (control, target)),
        Gate("rx", (control,), np.pi / 2.0),
        Gate("iswap", (control, target)),
        Gate("rz", (target,), np.pi / 2.0),
    ]


def _compile_cry(angle: float, control: int, target: int) -> list[Gate]:
    # CRy(a) = [I x Ry(a/2)] CNOT [I x Ry(-a/2)] CNOT, rightmost first.
    return [
        Gate("cnot", (control, target)),
        Gate("ry", (target,), -angle / 2.0),
        Gate("cnot", (control, target)),
        Gate("ry", (target,), angle / 2.0),
    ]


def compile(circuit: Circuit) -> Circuit:
    """Rewrite CNOT and CRy gates into iSWAPs plus rotations."""
    stage: list[Gate] = []
    for g in circuit.gates:
        if g.kind == "cry":
            stage.extend(_compile_cry(g.angle, *g.sites))
        else:
            stage.append(g)
    out: list[Gate] = []
    for g in stage:
        if g.kind == "cnot":
            out.extend(_compile_cnot(*g.sites))
        else:
            out.append(g)
    return Circuit(circuit.n_qubits, tuple(out))


def pcc_circuit(M: int) -> Circuit:
    """The 1 -> M equatorial cloning circuit (M = 2 or 3).

    Every wire of the output is a clone: the 1 -> 3 variant ends with an X
    on the input wire to convert its conjugate clone into a direct one.
    """
    if M == 2:
        return Circuit(2, (
            Gate("cnot", (0, 1)),
            Gate("cry", (1, 0), -np.pi / 2.0),
            Gate("cnot", (0, 1)),
        ))
    if M == 3:
        return Circuit(3, (
            Gate("ry", (1,), -2.0 * THETA_1),
            Gate("cnot", (1, 2)),
            Gate("ry", (2,), -2.0 * THETA_2),
            Gate("cnot", (2, 1)),
            Gate("ry", (1,), -2.0 * THETA_3),
            Gate("cnot", (0, 1)),
            Gate("cnot", (0, 2)),
            Gate("cnot", (1, 0)),
            Gate("cnot", (2, 0)),
            Gate("x", (0,)),
        ))
    raise ValueError("pcc_circuit supports M = 2 or 3 only")


def clone_wires(M: int) -> tuple[int, ...]:
    return tuple(range(pcc_circuit(M).n_qubits))


def input_register(circuit: Circuit, theta: float, phi: float) -> QuantumState:
    """Input on wire 0, remaining wires in |0>."""
    amps = BlochInput(theta, phi).amplitudes()
    full = amps
    for _ in range(circuit.n_qubits - 1):
        full = np.kron(full, np.array([1.0, 0.0]))
    return QuantumState("pure", full, circuit.n_qubits)


def run_noiseless(circuit: Circuit, theta: float = np.pi / 2.0,
                  phi: float = 0.0) -> QuantumState:
    state = input_register(circuit, theta, phi)
    return QuantumState("pure", unitary(circuit) @ state.data, circuit.n_qubits)


def clone_fidelities(circuit: Circuit, wires, theta: float = np.pi / 2.0,
                     phi: float = 0.0) -> list[float]:
    out = run_noiseless(circuit, theta, phi)
    target = QuantumState.pure(BlochInput(theta, phi).amplitudes())
    return [fidelity(partial_trace(out, {w}), target) for w in wires]


def run_noisy(circuit: Circuit, bath: redfield.BathSpec,
              theta: float = np.pi / 2.0, phi: float = 0.0,
              tol: float = 1e-8) -> QuantumState:
    """Execute a compiled circuit with per-qubit dephasing baths.

    Single-qubit gates are instantaneous unitaries; each iSWAP segment
    integrates the Redfield equation for duration Jt = pi/4 with the XY
    Hamiltonian on the gated pair and H = 0 on spectators (which still
    dephase under their own baths).
    """
    bad = [g.kind for g in circuit.gates if g.kind in ("cnot", "cry")]
    if bad:
        raise ValueError(f"run_noisy needs a compiled circuit; found {bad}")
    n = circuit.n_qubits
    rho = input_register(circuit, theta, phi).density_matrix()
    tensors: dict[tuple[int, int], redfield.RedfieldTensor] = {}
    for g in circuit.gates:
        if g.kind == "iswap":
            pair = g.sites
            if pair not in tensors:
                H = segment_hamiltonian(n, pair)
                tensors[pair] = redfield.build_tensor(H, range(n), bath)
            state = QuantumState.mixed(rho)
            state = redfield.evolve_master(state, None, tensors[pair],
                                           ISWAP_DURATION, tol=tol)
            rho = state.data
        else:
            U = _embed(n, g.matrix(), g.sites)
            rho = U @ rho @ U.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return QuantumState.mixed(rho / np.trace(rho).real)


def gates_fidelity(M: int, bath: redfield.BathSpec,
                   theta: float = np.pi / 2.0, phi: float = 0.0,
                   tol: float = 1e-8) -> float:
    """Mean clone fidelity of the compiled 1 -> M circuit under the bath."""
    circuit = compile(pcc_circuit(M))
    out = run_noisy(circuit, bath, theta, phi, tol=tol)
    target = QuantumState.pure(BlochInput(theta, phi).amplitudes())
    vals = [fidelity(partial_trace(out, {w}), target) for w in clone_wires(M)]
    return float(np.mean(vals))


def network_fidelity(M: int, bath: redfield.BathSpec,
                     theta: float = np.pi / 2.0, phi: float = 0.0,
                     tol: float = 1e-8) -> float:
    """Mean tip fidelity of the XY star under the bath at its ideal (B, t)."""
    task = CloneTask.make("star", 0.0, theta, phi, M=M)
    B, t = xy_optimum(M)
    graph = task.graph().with_uniform_field(B)
    from .network import HamiltonianSpec, assemble_hamiltonian

    H = assemble_hamiltonian(HamiltonianSpec(graph, task.lam))
    if bath.alpha == 0.0:
        out = evolve(H, task.initial_state(), t)
    else:
        tensor = redfield.build_tensor(H, range(graph.n_sites), bath)
        out = redfield.evolve_master(task.initial_state(), H, tensor, t, tol=tol)
    target = task.input_state()
    vals = [fidelity(partial_trace(out, {s}), target)
            for s in graph.sites_with_role("blank")]
    return float(np.mean(vals))


def compare(M: int, bath: redfield.BathSpec, tol: float = 1e-8):
    """(F_network, F_gates) for the same bath."""
    return network_fidelity(M, bath, tol=tol), gates_fidelity(M, bath, tol=tol)


def crossover(M: int, alpha_grid, beta: float = 10.0, cutoff: float = 1e4,
              tol: float = 1e-8) -> float:
    """Smallest grid alpha with F_network >= F_gates (sign change required).

    At weak coupling the ideal gate circuit beats the M = 3 network; as the
    bath strengthens its much longer run time makes it lose.
    """
    alphas = np.sort(np.asarray(alpha_grid, dtype=float))
    diffs = []
    for a in alphas:
        bath = redfield.BathSpec(a, beta, cutoff)
        f_net, f_gate = compare(M, bath, tol=tol)
        diffs.append(f_net - f_gate)
    diffs = np.asarray(diffs)
    above = np.nonzero(diffs >= 0.0)[0]
    if above.size == 0 or above[0] == 0:
        raise RuntimeError(
            "no sign change in the grid: the ordering never flips "
            f"(differences {diffs.tolist()})"
        )
    return float(alphas[above[0]])
