import numpy as np
import pytest

from spinclone import network
from spinclone.hilbert import DimensionError
from spinclone.network import (
    HamiltonianSpec,
    JosephsonSpec,
    assemble_hamiltonian,
    assemble_josephson,
    build_topology,
    excitation_number,
    total_sz,
)


def test_star_topology():
    g = build_topology("star", M=3)
    assert g.n_sites == 4
    assert g.roles == ("source", "blank", "blank", "blank")
    assert sorted(g.edges) == [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]


def test_tree_topology():
    g = build_topology("tree", k=2, j=1)
    assert g.n_sites == 7
    assert g.roles[0] == "source"
    assert g.roles[1] == g.roles[2] == "ancilla"
    assert all(r == "blank" for r in g.roles[3:])
    assert len(g.edges) == 6


def test_bipartite_topology():
    g = build_topology("bipartite", N=2, M=3)
    assert g.n_sites == 5
    assert len(g.edges) == 6
    assert g.roles == ("source", "source", "blank", "blank", "blank")


def test_invalid_graphs():
    with pytest.raises(ValueError):
        build_topology("custom", n_sites=2, edges=[(0, 0, 1.0)])
    with pytest.raises(ValueError):
        build_topology("custom", n_sites=2, edges=[(0, 1, 1.0), (1, 0, 2.0)])
    with pytest.raises(ValueError):
        build_topology("nonsense")
    with pytest.raises(DimensionError):
        build_topology("star", M=30)


def test_hamiltonian_two_site_xy():
    g = build_topology("star", M=1)
    H = assemble_hamiltonian(HamiltonianSpec(g, 0.0))
    # 1/4 (XX + YY) flips |01> <-> |10> with amplitude 1/2
    expect = np.zeros((4, 4))
    expect[1, 2] = expect[2, 1] = 0.5
    assert np.allclose(H, expect)


def test_hamiltonian_zz_and_field():
    g = build_topology("star", M=1).with_uniform_field(2.0)
    H = assemble_hamiltonian(HamiltonianSpec(g, 1.0))
    # diagonal: zz/4 + field; |00> -> 1/4 + 2, |01>,|10> -> -1/4, |11> -> 1/4 - 2
    assert np.allclose(np.diag(H).real, [2.25, -0.25, -0.25, -1.75])


def test_conserves_total_sz():
    g = build_topology("bipartite", N=2, M=2).with_uniform_field(0.7)
    H = assemble_hamiltonian(HamiltonianSpec(g, 0.3))
    S = total_sz(4)
    assert np.abs(H @ S - S @ H).max() < 1e-12


def test_josephson_reduces_to_xy():
    H = assemble_josephson(JosephsonSpec(e_k=0.0, j_k=1.0))
    g = build_topology("star", M=2).with_couplings({(0, 1): -1.0, (0, 2): -1.0})
    assert np.allclose(H, assemble_hamiltonian(HamiltonianSpec(g, 0.0)))
    with pytest.raises(ValueError):
        JosephsonSpec(e_k=0.1, j_k=0.0)


def test_josephson_zz_strength():
    e_k = 0.25
    H = assemble_josephson(JosephsonSpec(e_k=e_k, j_k=1.0))
    # diagonal of |000>: two zz bonds at +e_k each
    assert H[0, 0].real == pytest.approx(2 * e_k)


def test_excitation_number():
    counts = excitation_number(3)
    assert counts.tolist() == [0, 1, 1, 2, 1, 2, 2, 3]


def test_coupling_and_field_updates():
    g = build_topology("star", M=2)
    g2 = g.with_couplings({(0, 1): 0.5})
    assert dict(((i, j), J) for i, j, J in g2.edges)[(0, 1)] == 0.5
    g3 = g.with_fields([1.0, 2.0, 3.0])
    assert g3.fields == (1.0, 2.0, 3.0)
