"""Charge-qubit implementation study: fidelity vs the parasitic zz coupling.

The coupled Cooper-pair boxes realize the 1 -> 2 star with exchange strength
J = -J_K plus a parasitic sigma_z sigma_z term of strength E_K; in the
exchange-Hamiltonian parametrization this is coupling J = -J_K and
anisotropy lambda = -4 E_K / J_K (see network.assemble_josephson).  The scan
re-optimizes the hold time and a uniform sigma_z bias for every ratio
E_K / J_K and records the achievable clone fidelity at theta = pi/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloner import CloneReport, CloneTask, optimize


@dataclass(frozen=True)
class JosephsonScan:
    """Per-ratio optimized fidelities for the charge-qubit 1 -> 2 star."""

    ratios: tuple[float, ...]
    fidelities: tuple[float, ...]
    t_stars: tuple[float, ...]
    b_stars: tuple[float, ...]


def josephson_task(ratio: float, theta: float = np.pi / 2.0,
                   phi: float = 0.0) -> CloneTask:
    """Cloning task for the coupling Hamiltonian at E_K / J_K = ratio."""
    if ratio < 0:
        raise ValueError("ratio must be non-negative")
    edges = ((0, 1, -1.0), (0, 2, -1.0))
    roles = ("source", "blank", "blank")
    return CloneTask.make("custom", -4.0 * ratio, theta, phi,
                          n_sites=3, edges=edges, roles=roles)


def josephson_point(ratio: float, t_horizon: float = 50.0) -> CloneReport:
    """Optimized (B, t) and fidelity at one coupling ratio."""
    task = josephson_task(ratio)
    t_grid = np.arange(0.0, t_horizon + 0.025, 0.05)
    return optimize(task, t_grid=t_grid)


def josephson_fidelity_scan(grid, t_horizon: float = 50.0) -> JosephsonScan:
    """Optimize every ratio in the grid (short horizon: the 3-spin dynamics
    is periodic on the J timescale, so long recurrences add nothing)."""
    ratios, fids, ts, bs = [], [], [], []
    for ratio in np.asarray(grid, dtype=float):
        report = josephson_point(float(ratio), t_horizon=t_horizon)
        ratios.append(float(ratio))
        fids.append(report.mean_fidelity)
        ts.append(report.t_star)
        bs.append(report.B_star)
    return JosephsonScan(tuple(ratios), tuple(fids), tuple(ts), tuple(bs))
