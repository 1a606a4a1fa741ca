"""Gazeau-Klauder time evolution of the phase observables.

The temporally stable state carries the extra phases ``exp(-i rho_n gamma)``
on its coefficients, with ``gamma`` a dimensionless time (hbar = omega = 1).
Level weights, and with them ``<N>``, the Mandel parameter and the number
entropy, do not depend on ``gamma``.  The phase density used here is the
expanded double sum

    P(theta, gamma) = [1 + 2 sum_{k<n} c_n c_k cos((n-k) theta) cos((rho_n - rho_k) gamma)] / 2pi

for real ``z``.  Its cross terms are the real parts of the lag sums of the
evolved coefficients, so the double sum is evaluated lag by lag.

The GK ladder operators are not represented; the closed-form state carries
all of the dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entropic import number_entropy, phase_entropy
from .phase import (
    PhaseDistribution,
    PhaseGrid,
    density_from_lags,
    lag_sums,
    phase_variance_from_lags,
)
from .state import StateWeights, amplitudes

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EvolutionGrid:
    gamma_min: float = 0.0
    gamma_max: float = TWO_PI
    steps: int = 129

    def __post_init__(self):
        if not self.gamma_max > self.gamma_min:
            raise ValueError("gamma_max must exceed gamma_min")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")

    @property
    def gammas(self) -> np.ndarray:
        return np.linspace(self.gamma_min, self.gamma_max, self.steps)


class SweepRow(NamedTuple):
    gamma: float
    r_number: float
    r_phase: float
    total: float


def _require_real(state):
    if not state.is_real:
        raise ValueError("Gazeau-Klauder phase observables are defined here for real z only")


def _evolution_phase(rho, gamma, integer_valued):
    if integer_valued:
        # exact period 2pi for integer energies; reducing first keeps rho*gamma small
        gamma = math.remainder(gamma, TWO_PI)
    return np.exp(-1j * rho * gamma)


def evolve(amps: np.ndarray, state: StateWeights, t: float) -> np.ndarray:
    """Apply ``exp(-i H t)`` to coefficient vector ``amps`` of ``state``'s levels."""
    return amps * _evolution_phase(state.rho, t, state.spectrum.integer_valued)


def gk_amplitudes(state: StateWeights, gamma: float) -> np.ndarray:
    return evolve(amplitudes(state).astype(complex), state, gamma)


def distribution_from_amplitudes(amps: np.ndarray, grid: PhaseGrid, gamma: float = 0.0) -> PhaseDistribution:
    return PhaseDistribution(grid, density_from_lags(lag_sums(amps), grid), gamma)


def gk_phase_distribution(state: StateWeights, grid: PhaseGrid | None = None, gamma: float = 0.0) -> PhaseDistribution:
    _require_real(state)
    grid = grid or PhaseGrid()
    return distribution_from_amplitudes(gk_amplitudes(state, gamma), grid, gamma)


def gk_phase_variance(state: StateWeights, gamma: float = 0.0) -> float:
    """Phase variance on ``[-pi, pi)`` with each lag term weighted by ``cos((rho_n - rho_k) gamma)``."""
    _require_real(state)
    return phase_variance_from_lags(lag_sums(gk_amplitudes(state, gamma)))


def gk_phase_entropy(state: StateWeights, grid: PhaseGrid | None = None, gamma: float = 0.0) -> float:
    return phase_entropy(gk_phase_distribution(state, grid, gamma))


def gk_entropic_sum_sweep(state: StateWeights, grid: PhaseGrid | None = None,
                          evolution: EvolutionGrid | None = None) -> list[SweepRow]:
    grid = grid or PhaseGrid()
    evolution = evolution or EvolutionGrid()
    r_n = number_entropy(state)
    rows = []
    for gamma in evolution.gammas:
        r_phi = gk_phase_entropy(state, grid, float(gamma))
        rows.append(SweepRow(float(gamma), r_n, r_phi, r_n + r_phi))
    return rows
