"""Pegg-Barnett phase distribution and number-phase squeezing.

The phase density of a coherent state is the squared modulus of its
Fourier series in the level index,

    P(theta) = |sum_n c_n exp(-i n theta)|^2 / (2 pi),

with normalized coefficients ``c_n``.  Expanding the modulus groups the cross
terms by lag ``m = n - k``; those lag sums also give the closed-form phase
variance on the symmetric window ``[-pi, pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson, trapezoid

from .state import StateWeights, amplitudes, number_variance

TWO_PI = 2.0 * math.pi


class DegenerateCommutator(ArithmeticError):
    """``|<[N, phi]>|`` vanishes, so the squeezing parameters are undefined."""


@dataclass(frozen=True)
class PhaseGrid:
    theta0: float = -math.pi
    points: int = 4096

    def __post_init__(self):
        if self.points < 16 or self.points % 2:
            raise ValueError(f"points must be even and >= 16, got {self.points}")

    @property
    def step(self) -> float:
        return TWO_PI / self.points

    @property
    def theta(self) -> np.ndarray:
        return self.theta0 + self.step * np.arange(self.points)

    @property
    def symmetric(self) -> bool:
        return self.theta0 == -math.pi


@dataclass(frozen=True)
class PhaseDistribution:
    grid: PhaseGrid
    values: np.ndarray
    gamma: float = 0.0

    @property
    def theta(self) -> np.ndarray:
        return self.grid.theta

    def closed(self, f=None):
        """Samples of ``f(theta) * P`` with the periodic endpoint appended."""
        theta = np.append(self.theta, self.grid.theta0 + TWO_PI)
        vals = np.append(self.values, self.values[0])
        return theta, vals if f is None else f(theta) * vals

    def integrate(self, f=None) -> float:
        _, y = self.closed(f)
        return float(simpson(y, dx=self.grid.step))

    def integrate_trapezoid(self, f=None) -> float:
        _, y = self.closed(f)
        return float(trapezoid(y, dx=self.grid.step))


@dataclass(frozen=True)
class SqueezingReport:
    s_number: float
    s_phase: float
    commutator_magnitude: float
    phase_variance: float
    number_variance: float


def _fold(coeffs, points):
    """Fold series coefficients modulo the grid size; exact on grid nodes."""
    out = np.zeros(points, dtype=complex)
    np.add.at(out, np.arange(len(coeffs)) % points, coeffs)
    return out


def _clamp(values):
    # rounding can leave tiny negatives; anything below the floor is left visible
    return np.where((values < 0) & (values >= -1e-12), 0.0, values)


def lag_sums(amps: np.ndarray) -> np.ndarray:
    """``r_m = sum_k a_{k+m} conj(a_k)`` for ``m = 0 .. len(a)-1``."""
    n = len(amps)
    return np.correlate(amps, amps, mode="full")[n - 1:]


def cosine_series_on_grid(coeffs: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    """``sum_m coeffs_m cos(m theta_j)`` on every grid node via one FFT."""
    m = np.arange(len(coeffs))
    shifted = _fold(np.asarray(coeffs, dtype=float) * np.exp(1j * m * grid.theta0), grid.points)
    return (np.fft.ifft(shifted) * grid.points).real


def density_from_lags(lags: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    """Phase density ``(1 + 2 sum_{m>=1} Re r_m cos(m theta)) / 2pi`` from lag sums."""
    coeffs = np.real(lags).astype(float)
    coeffs[1:] *= 2.0
    return _clamp(cosine_series_on_grid(coeffs, grid) / TWO_PI)


def phase_distribution(state: StateWeights, grid: PhaseGrid | None = None) -> PhaseDistribution:
    """Evaluate ``P(theta)`` on the grid as a squared modulus, O(n log n + M log M)."""
    grid = grid or PhaseGrid()
    c = amplitudes(state)
    n = np.arange(len(c))
    spectrum = np.fft.fft(_fold(c * np.exp(-1j * n * grid.theta0), grid.points))
    values = _clamp(np.abs(spectrum) ** 2 / TWO_PI)
    return PhaseDistribution(grid, values, 0.0)


def phase_density_expanded(state: StateWeights, theta) -> np.ndarray:
    """Direct double-sum form of ``P(theta)`` at arbitrary angles.

    Diagonal terms sum to one; each pair ``k < n`` contributes
    ``2 Re[c_n conj(c_k) exp(-i(n-k) theta)]``.  Kept independent of the FFT
    path as a cross-check.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    c = amplitudes(state)
    n = np.arange(len(c))
    pair = np.outer(c, np.conj(c))
    lag = n[:, None] - n[None, :]
    lower = lag > 0
    by_lag = np.zeros(len(c), dtype=complex)
    np.add.at(by_lag, lag[lower], pair[lower])
    total = np.real(np.exp(-1j * np.outer(theta, n)) @ by_lag)
    return (float(np.sum(np.abs(c) ** 2)) + 2.0 * total) / TWO_PI


def density_at(state: StateWeights, theta: float) -> float:
    c = amplitudes(state)
    return float(abs(np.sum(c * np.exp(-1j * np.arange(len(c)) * theta))) ** 2 / TWO_PI)


def phase_variance_from_lags(lags: np.ndarray) -> float:
    m = np.arange(1, len(lags))
    sign = np.where(m % 2, -1.0, 1.0)
    return float(math.pi**2 / 3 + 4.0 * np.sum(np.real(lags[1:]) * sign / m**2))


def phase_variance_series(state: StateWeights) -> float:
    """Closed-form phase variance on the window ``[-pi, pi)``.

    ``pi^2/3 + 4 sum_{k<n} c_n c_k (-1)^{n-k} / (n-k)^2`` for real ``z``.
    Complex ``z`` breaks the symmetry the series relies on, so the variance is
    integrated from the distribution instead.
    """
    if not state.is_real:
        return phase_variance_quadrature(phase_distribution(state))
    return phase_variance_from_lags(lag_sums(amplitudes(state)))


def phase_variance_quadrature(dist: PhaseDistribution) -> float:
    first = dist.integrate(lambda t: t)
    second = dist.integrate(lambda t: t * t)
    return second - first * first


def phase_variance(state: StateWeights, grid: PhaseGrid | None = None) -> float:
    """Series on the symmetric window for real ``z``, quadrature otherwise."""
    grid = grid or PhaseGrid()
    if grid.symmetric and state.is_real:
        return phase_variance_series(state)
    return phase_variance_quadrature(phase_distribution(state, grid))


def number_phase_commutator(state: StateWeights, grid: PhaseGrid | None = None) -> float:
    """Imaginary part of ``<[N, phi]>``, i.e. ``1 - 2 pi P(theta0)``."""
    grid = grid or PhaseGrid()
    return 1.0 - TWO_PI * density_at(state, grid.theta0)


def squeezing_report(state: StateWeights, grid: PhaseGrid | None = None) -> SqueezingReport:
    """Number and phase squeezing parameters ``2 Var / |<[N, phi]>| - 1``.

    Raises DegenerateCommutator when the commutator magnitude is below 1e-12
    (the vacuum, for instance).
    """
    grid = grid or PhaseGrid()
    comm = abs(number_phase_commutator(state, grid))
    n_var = number_variance(state)
    p_var = phase_variance(state, grid)
    if comm < 1e-12:
        raise DegenerateCommutator(f"|<[N, phi]>| = {comm:.3g} at z = {state.z}")
    return SqueezingReport(2 * n_var / comm - 1, 2 * p_var / comm - 1, comm, p_var, n_var)
