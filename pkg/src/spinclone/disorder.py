"""Static coupling imperfections and classical fluctuating-parameter noise.

Two Monte-Carlo studies share this module:

* static disorder -- every hub coupling is displaced from J = 1 by a random
  offset of magnitude uniform in [0, epsilon], with the signs of consecutive
  offsets correlated through the parameter mu;
* classical noise -- a single quenched Gaussian offset (standard deviation
  delta) is applied per sample, either to every coupling at once or to the
  uniform field.

Both average the site-mean clone fidelity at fixed (B, t) -- the optimum of
the ideal, noise-free problem -- over many realizations.  Realizations draw
from independent RNG streams seeded by (seed, index), so results are
reproducible and independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloner import CloneTask, _ScanEngine
from .network import ROLE_BLANK


@dataclass(frozen=True)
class DisorderSpec:
    """Static-imperfection ensemble parameters.

    epsilon: half-width of the uniform coupling spread (couplings land in
             [1 - epsilon, 1 + epsilon]).
    mu:      sign-correlation parameter in [-1, 1]; consecutive offsets share
             a sign with probability (1 + mu) / 2, so mu = 0 is uncorrelated
             and mu = 1 gives one common sign per realization.
    """

    epsilon: float
    mu: float = 0.0
    n_realizations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if not -1.0 <= self.mu <= 1.0:
            raise ValueError("mu must lie in [-1, 1]")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be positive")


@dataclass(frozen=True)
class ClassicalNoiseSpec:
    """Quenched Gaussian offset on the couplings ('J') or the field ('B')."""

    target: str
    delta: float
    n_samples: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.target not in ("J", "B"):
            raise ValueError("target must be 'J' or 'B'")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")


@dataclass(frozen=True)
class EnsembleResult:
    """Monte-Carlo average of the site-mean clone fidelity."""

    mean_fidelity: float
    std_error: float
    per_realization: tuple[float, ...]


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


def sample_couplings(graph, spec: DisorderSpec, realization_index: int) -> dict:
    """Perturbed coupling map {(i, j): J} for one disorder realization.

    Offsets have magnitude uniform in [0, epsilon].  The links are taken in
    edge order (for a star, ordered by blank index); the first sign is
    unbiased, and each subsequent sign repeats the previous one with
    probability (1 + mu) / 2.
    """
    rng = _stream(spec.seed, realization_index)
    couplings = {}
    sign = 0.0
    for i, j, J in graph.edges:
        magnitude = rng.uniform(0.0, spec.epsilon)
        if sign == 0.0:
            sign = 1.0 if rng.random() < 0.5 else -1.0
        elif rng.random() >= (1.0 + spec.mu) / 2.0:
            sign = -sign
        couplings[(min(i, j), max(i, j))] = J + sign * magnitude
    return couplings


def _perturbed_engine(task: CloneTask, couplings: dict) -> _ScanEngine:
    graph = task.graph()
    edges = tuple(
        (i, j, couplings.get((min(i, j), max(i, j)), J)) for i, j, J in graph.edges
    )
    custom = CloneTask.make(
        "custom", task.lam, task.theta, task.phi, task.blank_policy,
        n_sites=graph.n_sites, edges=edges, roles=graph.roles,
    )
    return _ScanEngine(custom)


def _summarize(values: np.ndarray) -> EnsembleResult:
    n = values.size
    stderr = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return EnsembleResult(float(values.mean()), stderr, tuple(values))


def disorder_ensemble(task: CloneTask, spec: DisorderSpec,
                      B: float, t: float) -> EnsembleResult:
    """Average the site-mean fidelity over coupling-disorder realizations.

    (B, t) are held fixed -- pass the optimum of the ideal problem.  Each
    realization perturbs the couplings via sample_couplings and re-evolves.
    """
    graph = task.graph()
    values = np.empty(spec.n_realizations)
    for index in range(spec.n_realizations):
        couplings = sample_couplings(graph, spec, index)
        engine = _perturbed_engine(task, couplings)
        values[index] = engine.mean_fidelity(B, t)
    return _summarize(values)


def classical_noise_average(task: CloneTask, spec: ClassicalNoiseSpec,
                            B: float, t: float) -> EnsembleResult:
    """Average the site-mean fidelity over quenched Gaussian offsets.

    target 'J': one common offset xi ~ N(0, delta^2) shifts every coupling
    (J -> 1 + xi) per sample; target 'B': the offset shifts the uniform field
    (B -> B + xi).  (B, t) are the optimum of the noiseless problem.
    """
    graph = task.graph()
    values = np.empty(spec.n_samples)
    if spec.target == "B":
        engine = _ScanEngine(task)
        for index in range(spec.n_samples):
            xi = _stream(spec.seed, index).normal(0.0, spec.delta)
            values[index] = engine.mean_fidelity(B + xi, t)
    else:
        for index in range(spec.n_samples):
            xi = _stream(spec.seed, index).normal(0.0, spec.delta)
            couplings = {
                (min(i, j), max(i, j)): J + xi for i, j, J in graph.edges
            }
            engine = _perturbed_engine(task, couplings)
            values[index] = engine.mean_fidelity(B, t)
    return _summarize(values)


def per_site_spread(task: CloneTask, spec: DisorderSpec,
                    B: float, t: float) -> np.ndarray:
    """Per-site fidelities for every realization, shape (n_realizations, M).

    Individual realizations break the blank-permutation symmetry; only the
    ensemble average restores it.
    """
    graph = task.graph()
    M = len(graph.sites_with_role(ROLE_BLANK))
    out = np.empty((spec.n_realizations, M))
    for index in range(spec.n_realizations):
        couplings = sample_couplings(graph, spec, index)
        engine = _perturbed_engine(task, couplings)
        out[index] = engine.per_site_fidelity(B, t)
    return out
