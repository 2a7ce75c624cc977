"""Numerical laboratory for quantum cloning by free evolution of spin networks.

The package assembles XXZ/XY/Heisenberg Hamiltonians on configurable qubit
graphs, evolves states exactly by eigendecomposition, measures clone
fidelities, optimizes over field and time, and stress-tests the protocol under
static disorder, classical parameter fluctuations, and a Bloch-Redfield
quantum bath -- including a gate-circuit baseline for head-to-head comparison.

Basis convention used everywhere: site 0 is the *most significant* bit of the
computational index, and sigma_z = diag(1, -1) so |0> carries sigma_z = +1.
Couplings are measured in units of J = 1 and times in 1/J.
"""

__version__ = "0.1.0"
