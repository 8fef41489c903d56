"""
Finite-shot measurement emulation.

An expectation ``<O>`` is estimated from ``k ~ Binomial(shots, p)`` outcomes
with ``p = (1 + <O>) / 2`` as ``2 k / shots - 1``.  X and Y are measured by
rotating the state into the computational basis first.  No gate or readout
error is modeled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import Dataset, chi2_from_predictions, readout
from .gates import CircuitModel, final_states
from .linalg import INPUT_TOL, OBSERVABLES

DEFAULT_SHOTS = 50_000

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG = np.diag([1, -1j])
# maps the +1 eigenstate of each observable to |0>
_BASIS_CHANGE = {"Z": np.eye(2, dtype=complex), "X": _H, "Y": _H @ _SDG}


@dataclass(frozen=True)
class ShotConfig:
    shots: int = DEFAULT_SHOTS
    seed: int = 0

    def __post_init__(self):
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValueError(f"shots must be a positive integer, got {self.shots!r}")


def _prob_zero(states: np.ndarray, obs: str) -> np.ndarray:
    if obs not in OBSERVABLES:
        raise ValueError(f"unknown observable {obs!r}")
    rotated = states @ _BASIS_CHANGE[obs].T
    return np.clip(np.abs(rotated[:, 0]) ** 2, 0.0, 1.0)


def sample_expectation(state, obs: str, cfg: ShotConfig) -> float:
    """Shot-noise estimate of ``<obs>`` for one normalized state."""
    state = np.asarray(state, dtype=complex).reshape(1, 2)
    if abs(float(np.vdot(state, state).real) - 1.0) > INPUT_TOL:
        raise ValueError("state is not normalized")
    p = _prob_zero(state, obs)[0]
    k = np.random.default_rng(cfg.seed).binomial(cfg.shots, p)
    return 2.0 * k / cfg.shots - 1.0


def sample_expectations(states: np.ndarray, obs: str, cfg: ShotConfig) -> np.ndarray:
    """Estimates for a batch of states.

    Point ``j`` and observable ``obs`` draw from their own stream,
    ``SeedSequence(cfg.seed, spawn_key=(j, index(obs)))``, so results do not
    depend on evaluation order or batch composition.
    """
    p = _prob_zero(np.asarray(states, dtype=complex), obs)
    o = OBSERVABLES.index(obs)
    k = np.array(
        [
            np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(j, o))).binomial(
                cfg.shots, pj
            )
            for j, pj in enumerate(p)
        ]
    )
    return 2.0 * k / cfg.shots - 1.0


def sampled_readout(states: np.ndarray, benchmark: str, cfg: ShotConfig) -> np.ndarray:
    if benchmark == "Z":
        return sample_expectations(states, "Z", cfg)
    return sample_expectations(states, "X", cfg) + 1j * sample_expectations(states, "Y", cfg)


def sampled_chi2(model: CircuitModel, params, data: Dataset, benchmark: str, cfg: ShotConfig) -> float:
    """Chi-square with every expectation replaced by its finite-shot estimate."""
    data.check_for(benchmark)
    states = final_states(model, params, data.x)
    return chi2_from_predictions(sampled_readout(states, benchmark, cfg), data, benchmark)


def variance_floor(model: CircuitModel, params, data: Dataset, benchmark: str, shots: int) -> float:
    """Expected sampled chi-square minus exact chi-square: mean binomial variance."""
    states = final_states(model, params, data.x)
    pred = readout(states, benchmark)
    if benchmark == "Z":
        var = 1.0 - pred.real**2
    else:
        var = (1.0 - pred.real**2) + (1.0 - pred.imag**2)
    return float(np.mean(var) / shots)
