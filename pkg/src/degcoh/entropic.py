"""Number and phase Shannon entropies and the ``ln(2 pi)`` uncertainty bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phase import PhaseDistribution, PhaseGrid, phase_distribution
from .state import StateWeights

LN_2PI = math.log(2.0 * math.pi)

# 0 ln 0 := 0 below this floor
_FLOOR = 1e-300


@dataclass(frozen=True)
class EntropyReport:
    r_number: float
    r_phase: float
    total: float
    bound: float = LN_2PI

    @property
    def margin(self) -> float:
        return self.total - self.bound


def number_entropy(state: StateWeights) -> float:
    """``-sum w_n ln w_n`` using the log-space terms for ``ln w_n``."""
    w = state.weights
    keep = w >= _FLOOR
    log_w = state.log_raw[keep] - state.log_normalization
    return float(max(0.0, -np.dot(w[keep], log_w)))


def _p_log_p(values):
    out = np.zeros_like(values)
    keep = values >= _FLOOR
    out[keep] = values[keep] * np.log(values[keep])
    return out


def phase_entropy(dist: PhaseDistribution) -> float:
    """``-int P ln P dtheta`` over the window by composite Simpson."""
    return -PhaseDistribution(dist.grid, _p_log_p(dist.values), dist.gamma).integrate()


def phase_entropy_trapezoid(dist: PhaseDistribution) -> float:
    return -PhaseDistribution(dist.grid, _p_log_p(dist.values), dist.gamma).integrate_trapezoid()


def entropy_report(state: StateWeights, grid: PhaseGrid | None = None) -> EntropyReport:
    r_n = number_entropy(state)
    r_phi = phase_entropy(phase_distribution(state, grid or PhaseGrid()))
    return EntropyReport(r_n, r_phi, r_n + r_phi)
