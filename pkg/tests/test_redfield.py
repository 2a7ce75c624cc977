import numpy as np
import pytest

from spinclone import network
from spinclone.dynamics import evolve
from spinclone.hilbert import SZ, BlochInput, QuantumState, operator_on
from spinclone.network import HamiltonianSpec, build_topology
from spinclone.redfield import (
    BathSpec,
    bath_spectrum,
    build_tensor,
    evolve_master,
)


def _xy_star(M, B):
    g = build_topology("star", M=M).with_uniform_field(B)
    return network.assemble_hamiltonian(HamiltonianSpec(g, 0.0))


def test_bath_spec_validation():
    with pytest.raises(ValueError):
        BathSpec(-0.1)
    with pytest.raises(ValueError):
        BathSpec(0.1, inv_temperature=0.0)
    with pytest.raises(ValueError):
        BathSpec(0.1, cutoff=-1.0)


def test_bath_spectrum_limits_and_balance():
    bath = BathSpec(alpha=0.02, inv_temperature=4.0, cutoff=100.0)
    assert bath_spectrum(0.0, bath) == pytest.approx(np.pi * bath.alpha / 4.0)
    for w in (0.3, 1.7, 5.0):
        ratio = bath_spectrum(-w, bath) / bath_spectrum(w, bath)
        assert ratio == pytest.approx(np.exp(4.0 * w), rel=1e-12)
    # array evaluation matches scalar
    ws = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
    arr = bath_spectrum(ws, bath)
    assert np.allclose(arr, [bath_spectrum(float(w), bath) for w in ws])


def test_tensor_trace_preservation():
    H = _xy_star(2, 0.6)
    tensor = build_tensor(H, range(3), BathSpec(0.01))
    rng = np.random.default_rng(0)
    A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    rho = A @ A.conj().T
    rho /= np.trace(rho)
    assert abs(np.trace(tensor.dissipator(rho))) < 1e-14
    # rank-4 export agrees with the operator form
    R = tensor.tensor()
    direct = -np.einsum("abcd,cd->ab", R, rho)
    assert np.abs(direct - tensor.dissipator(rho)).max() < 1e-13


def test_tensor_hermiticity_preservation():
    H = _xy_star(1, 0.3)
    tensor = build_tensor(H, range(2), BathSpec(0.05))
    rng = np.random.default_rng(1)
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = 0.5 * (A + A.conj().T)
    out = tensor.dissipator(rho)
    assert np.abs(out - out.conj().T).max() < 1e-13


def test_alpha_zero_reduces_to_unitary():
    H = _xy_star(2, 0.8)
    tensor = build_tensor(H, range(3), BathSpec(0.0))
    psi0 = QuantumState.bloch(BlochInput(np.pi / 2, 0.0))
    from spinclone.hilbert import compose

    state0 = compose([psi0, QuantumState.basis(1), QuantumState.basis(1)])
    t = 1.9
    rho = evolve_master(state0, H, tensor, t, tol=1e-10)
    exact = evolve(H, state0, t).density_matrix()
    assert np.abs(rho.data - exact).max() < 1e-8


def test_pure_dephasing_closed_form():
    # single qubit, H = 0: coherence decays at rate 2 G(0) for a sigma_z bath
    bath = BathSpec(alpha=0.02, inv_temperature=5.0)
    H = np.zeros((2, 2))
    tensor = build_tensor(H, [0], bath)
    plus = QuantumState.bloch(BlochInput(np.pi / 2, 0.0))
    t = 3.0
    out = evolve_master(plus, H, tensor, t, tol=1e-10)
    rate = 2.0 * bath_spectrum(0.0, bath)
    assert out.data[0, 1].real == pytest.approx(0.5 * np.exp(-rate * t), abs=1e-7)
    assert np.diag(out.data).real == pytest.approx([0.5, 0.5], abs=1e-9)


def test_thermalization_detailed_balance():
    # two-site XY chain: populations within an excitation sector settle to
    # Gibbs ratios of the eigenenergies (sigma_z baths conserve total sz)
    beta = 2.0
    bath = BathSpec(alpha=0.05, inv_temperature=beta)
    H = _xy_star(1, 0.0)
    tensor = build_tensor(H, [0, 1], bath)
    psi0 = QuantumState.basis(2, (0,))  # |10>: one excitation
    out = evolve_master(psi0, H, tensor, 400.0, tol=1e-9)
    spec = tensor.spectrum
    pops = np.diag(spec.eigenvectors.conj().T @ out.data @ spec.eigenvectors).real
    # the one-excitation sector has eigenenergies -1/2 and +1/2
    sector = [k for k, E in enumerate(spec.eigenvalues) if abs(abs(E) - 0.5) < 1e-9]
    lo, hi = sorted(sector, key=lambda k: spec.eigenvalues[k])
    assert pops[lo] / pops[hi] == pytest.approx(np.exp(beta * 1.0), rel=5e-3)


def test_evolve_master_trace_and_positivity():
    H = _xy_star(2, 0.7)
    tensor = build_tensor(H, range(3), BathSpec(0.02))
    from spinclone.hilbert import compose

    state0 = compose([QuantumState.bloch(BlochInput(np.pi / 2, 0.3)),
                      QuantumState.basis(1), QuantumState.basis(1)])
    out = evolve_master(state0, H, tensor, 5.0)
    assert np.trace(out.data).real == pytest.approx(1.0, abs=1e-7)
    assert np.linalg.eigvalsh(out.data).min() > -1e-8
    assert np.abs(out.data - out.data.conj().T).max() < 1e-12


def test_evolve_master_t_eval_snapshots():
    H = _xy_star(1, 0.4)
    tensor = build_tensor(H, [0, 1], BathSpec(0.03))
    psi0 = QuantumState.basis(2, (0,))
    ts = [0.5, 1.0, 2.0]
    snaps = evolve_master(psi0, H, tensor, 2.0, t_eval=ts)
    assert len(snaps) == 3
    final = evolve_master(psi0, H, tensor, 2.0)
    assert np.abs(snaps[-1].data - final.data).max() < 1e-6


def test_dimension_guards():
    from spinclone.hilbert import DimensionError

    with pytest.raises(DimensionError):
        build_tensor(np.zeros((128, 128)), [0], BathSpec(0.01))
    with pytest.raises(ValueError):
        build_tensor(np.zeros((4, 4)), [0, 1], [BathSpec(0.01)])


def test_degenerate_warning():
    # degenerate eigenbasis whose vectors mix different sigma_z values: the
    # filtered coupling depends on the basis choice, which must be flagged
    from spinclone.dynamics import Spectrum

    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    spec = Spectrum(np.zeros(2), hadamard.astype(complex))
    with pytest.warns(UserWarning, match="degenerate"):
        build_tensor(spec, [0], BathSpec(0.01))
