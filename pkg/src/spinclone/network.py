"""Network topologies and Hamiltonian assembly.

Builds spin graphs (star, tree, bipartite star, tetrahedron, complete,
custom), assembles the anisotropic exchange Hamiltonian

    H = 1/4 sum_edges J_ij (sx sx + sy sy + lambda sz sz) + sum_i (B_i/2) sz_i

and the charge-qubit coupling Hamiltonian used in the superconducting
implementation study.  All couplings are in units of J = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .hilbert import MAX_SITES, SX, SY, SZ, DimensionError, operator_on

ROLE_SOURCE = "source"
ROLE_BLANK = "blank"
ROLE_ANCILLA = "ancilla"


@dataclass(frozen=True)
class SpinGraph:
    """Weighted undirected coupling graph with per-site longitudinal fields."""

    n_sites: int
    edges: tuple[tuple[int, int, float], ...]
    fields: tuple[float, ...]
    roles: tuple[str, ...]

    def __post_init__(self):
        if self.n_sites < 1 or self.n_sites > MAX_SITES:
            raise DimensionError(f"n_sites {self.n_sites} outside [1, {MAX_SITES}]")
        seen = set()
        for i, j, _ in self.edges:
            if i == j:
                raise ValueError(f"self-loop on site {i}")
            if not (0 <= i < self.n_sites and 0 <= j < self.n_sites):
                raise ValueError(f"edge ({i},{j}) references missing site")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        if len(self.fields) != self.n_sites or len(self.roles) != self.n_sites:
            raise ValueError("fields and roles must have one entry per site")

    def with_uniform_field(self, B: float) -> "SpinGraph":
        return replace(self, fields=tuple(float(B) for _ in range(self.n_sites)))

    def with_fields(self, fields) -> "SpinGraph":
        return replace(self, fields=tuple(float(b) for b in fields))

    def with_couplings(self, couplings: dict[tuple[int, int], float]) -> "SpinGraph":
        """Replace edge weights; keys are (i, j) pairs in either order."""
        new_edges = []
        for i, j, J in self.edges:
            key = (min(i, j), max(i, j))
            new_edges.append((i, j, float(couplings.get(key, J))))
        return replace(self, edges=tuple(new_edges))

    def sites_with_role(self, role: str) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r == role]


@dataclass(frozen=True)
class HamiltonianSpec:
    """Everything needed to assemble the exchange Hamiltonian."""

    graph: SpinGraph
    lam: float  # anisotropy: 0 = XY, 1 = Heisenberg; arbitrary real accepted


@dataclass(frozen=True)
class JosephsonSpec:
    """Charge-qubit coupling parameters for the 3-site (1 -> 2) star.

    The single-qubit terms delta_e_c and e_j are recorded for completeness but
    are switched off during the cloning evolution.
    """

    e_k: float
    j_k: float
    delta_e_c: float = 0.0
    e_j: float = 0.0

    def __post_init__(self):
        if self.j_k <= 0:
            raise ValueError("j_k must be positive")


def build_topology(kind: str, **params) -> SpinGraph:
    """Construct a named topology with uniform coupling J = 1.

    Kinds:
      star:          M tips around a source hub (site 0).
      tree:          k-ary tree of depth j+1; root is the source, the
                     M = k**(j+1) leaves are blanks, interior sites ancillae.
      bipartite:     N source sites each coupled to all M blank tips.
      tetrahedron:   source hub + 3 blanks, all six pairwise edges.
      complete:      n all-to-all sites, site 0 the source.
      custom:        explicit edge list [(i, j, J), ...] with n_sites.
    """
    if kind == "star":
        M = int(params["M"])
        if M < 1:
            raise ValueError("star requires M >= 1")
        n = M + 1
        edges = tuple((0, i, 1.0) for i in range(1, n))
        roles = (ROLE_SOURCE,) + (ROLE_BLANK,) * M
    elif kind == "tree":
        k, j = int(params["k"]), int(params["j"])
        if k < 1 or j < 0:
            raise ValueError("tree requires k >= 1 and j >= 0")
        # levels 0..j+1; level l holds k**l sites
        level_offsets = [0]
        for level in range(j + 1):
            level_offsets.append(level_offsets[-1] + k ** level)
        n = level_offsets[-1] + k ** (j + 1)
        if n > MAX_SITES:
            raise DimensionError(f"tree of {n} sites exceeds the cap")
        edges = []
        for level in range(j + 1):
            for p in range(k ** level):
                parent = level_offsets[level] + p
                for c in range(k):
                    child = level_offsets[level + 1] + p * k + c
                    edges.append((parent, child, 1.0))
        leaves_start = level_offsets[-1]
        roles = tuple(
            ROLE_SOURCE if i == 0 else (ROLE_BLANK if i >= leaves_start else ROLE_ANCILLA)
            for i in range(n)
        )
        edges = tuple(edges)
    elif kind == "bipartite":
        N, M = int(params["N"]), int(params["M"])
        if N < 1 or M < 1:
            raise ValueError("bipartite requires N >= 1 and M >= 1")
        n = N + M
        edges = tuple((s, N + b, 1.0) for s in range(N) for b in range(M))
        roles = (ROLE_SOURCE,) * N + (ROLE_BLANK,) * M
    elif kind == "tetrahedron":
        n = 4
        edges = tuple(
            (i, j, 1.0 if i == 0 else 0.0) for i in range(4) for j in range(i + 1, 4)
        )
        roles = (ROLE_SOURCE,) + (ROLE_BLANK,) * 3
    elif kind == "complete":
        n = int(params["n"])
        if n < 2:
            raise ValueError("complete requires n >= 2")
        edges = tuple((i, j, 1.0) for i in range(n) for j in range(i + 1, n))
        roles = (ROLE_SOURCE,) + (ROLE_BLANK,) * (n - 1)
    elif kind == "custom":
        n = int(params["n_sites"])
        edges = tuple((int(i), int(j), float(J)) for i, j, J in params["edges"])
        roles = tuple(params.get("roles", (ROLE_SOURCE,) + (ROLE_BLANK,) * (n - 1)))
    else:
        raise ValueError(f"unknown topology kind {kind!r}")
    graph = SpinGraph(n, edges, (0.0,) * n, roles)
    return graph


def assemble_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    """Dense Hermitian matrix of the exchange Hamiltonian on the graph."""
    g = spec.graph
    n = g.n_sites
    dim = 2 ** n
    H = np.zeros((dim, dim), dtype=complex)
    for i, j, J in g.edges:
        if J == 0.0:
            continue
        H += 0.25 * J * (
            operator_on(n, {i: SX, j: SX})
            + operator_on(n, {i: SY, j: SY})
            + spec.lam * operator_on(n, {i: SZ, j: SZ})
        )
    for i, B in enumerate(g.fields):
        if B != 0.0:
            H += 0.5 * B * operator_on(n, {i: SZ})
    return H


def assemble_josephson(spec: JosephsonSpec) -> np.ndarray:
    """Coupling Hamiltonian of the 3-qubit charge-qubit star (center site 0).

        H = sum_{i in {1,2}} e_k sz_0 sz_i - (j_k/2) sum_i [s+_0 s-_i + h.c.]

    At e_k = 0 this equals the XY star Hamiltonian with coupling J = -j_k.
    Equivalently it is the exchange Hamiltonian with J = -j_k and
    lambda = -4 e_k / j_k, which is how the scan module builds it.
    """
    graph = build_topology("star", M=2)
    ham = HamiltonianSpec(
        graph=graph.with_couplings({(0, 1): -spec.j_k, (0, 2): -spec.j_k}),
        lam=-4.0 * spec.e_k / spec.j_k,
    )
    return assemble_hamiltonian(ham)


def total_sz(n_sites: int) -> np.ndarray:
    """Matrix of the conserved total sigma_z."""
    dim = 2 ** n_sites
    diag = np.zeros(dim)
    for idx in range(dim):
        ones = bin(idx).count("1")
        diag[idx] = (n_sites - ones) - ones
    return np.diag(diag.astype(complex))


def excitation_number(n_sites: int) -> np.ndarray:
    """Number of excited (|1>) qubits per basis index, as an int array."""
    idx = np.arange(2 ** n_sites)
    counts = np.zeros_like(idx)
    for bit in range(n_sites):
        counts += (idx >> bit) & 1
    return counts
