"""Coherent states over a degenerate spectrum, held as log-space level weights.

The state is ``|z> = N^{-1/2} sum_n z^n / sqrt([rho_n]!) |n, d_n>`` where the
level vectors ``|n, d_n>`` have squared norm ``d_n``.  The probability of level
``n`` is therefore ``|z|^{2n} d_n / ([rho_n]! N)`` and every number-like
observable depends on the state only through these weights.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .spectrum import DegenerateSpectrum


class TruncationNotConverged(RuntimeError):
    """The series tail is still significant where the available levels end."""


class NonFiniteInput(ValueError):
    pass


class SpectrumTooShort(ValueError):
    """A ladder-operator expectation needs one level beyond the truncation."""


@dataclass(frozen=True)
class TruncationPolicy:
    """When to stop summing the coherent-state series.

    ``finite_system`` declares that the spectrum is the whole system (for
    example the 23 tabulated box levels), so running out of levels is exact
    rather than a truncation failure.
    """

    max_levels: int = 512
    tail_tolerance: float = 1e-15
    consecutive_required: int = 5
    finite_system: bool = False

    def __post_init__(self):
        if self.max_levels < 2:
            raise ValueError("max_levels must be >= 2")
        if not self.tail_tolerance > 0:
            raise ValueError("tail_tolerance must be > 0")
        if self.consecutive_required < 1:
            raise ValueError("consecutive_required must be >= 1")


@dataclass(frozen=True)
class StateWeights:
    z: complex
    log_raw: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    log_normalization: float
    levels_used: int
    spectrum: DegenerateSpectrum = field(repr=False)

    @property
    def is_real(self) -> bool:
        return self.z.imag == 0.0

    @property
    def rho(self) -> np.ndarray:
        return self.spectrum.rho[: self.levels_used]

    @property
    def degeneracy(self) -> np.ndarray:
        return self.spectrum.degeneracy[: self.levels_used]


@dataclass(frozen=True)
class QuadratureReport:
    var_x: float
    var_p: float
    commutator_expectation: float
    max_relative_deviation: float


def make_state(spectrum: DegenerateSpectrum, z, policy: TruncationPolicy | None = None) -> StateWeights:
    """Build the normalized level weights of the coherent state at ``z``.

    The terms ``t_n = |z|^{2n} d_n / [rho_n]!`` are accumulated as logarithms
    through ``ln t_{n+1} = ln t_n + ln|z|^2 + ln d_{n+1} - ln d_n - ln rho_{n+1}``.
    Summation stops once ``consecutive_required`` successive coefficients
    ``sqrt(t_n)`` each carry less than ``tail_tolerance`` of the running sum
    of coefficients.

    Raises
    ------
    NonFiniteInput
        If ``z`` is NaN or infinite.
    TruncationNotConverged
        If the levels (or ``max_levels``) run out while the last coefficient
        still holds more than ``1e3 * tail_tolerance`` of the sum.
    """
    policy = policy or TruncationPolicy()
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteInput(f"z must be finite, got {z}")

    available = min(len(spectrum), policy.max_levels)
    rho = spectrum.rho[:available]
    deg = spectrum.degeneracy[:available]
    log_deg = np.log(deg)
    r2 = abs(z) ** 2
    with np.errstate(divide="ignore"):
        log_r2 = math.log(r2) if r2 > 0 else -np.inf
        steps = log_r2 + log_deg[1:] - log_deg[:-1] - np.log(rho[1:])
    log_raw = np.empty(available)
    log_raw[0] = log_deg[0]
    log_raw[1:] = log_deg[0] + np.cumsum(steps)

    # Shares are measured on the coefficient magnitudes sqrt(t_n): phase
    # observables are bilinear in them, so their tail must be negligible, not
    # only the tail of the weights (which is then below tail_tolerance**2).
    half = 0.5 * log_raw
    running = np.logaddexp.accumulate(half)
    with np.errstate(invalid="ignore"):
        small = (half - running) < math.log(policy.tail_tolerance)
    small[0] = False

    k = policy.consecutive_required
    run = np.convolve(small.astype(int), np.ones(k, dtype=int), mode="valid") if available >= k else []
    hits = np.flatnonzero(np.asarray(run) == k)
    if len(hits):
        used = int(hits[0]) + k
    else:
        used = available
        exhausted = available == len(spectrum)
        if not (policy.finite_system and exhausted):
            last_share = math.exp(half[-1] - running[-1]) if np.isfinite(half[-1]) else 0.0
            if last_share > 1e3 * policy.tail_tolerance:
                where = "spectrum exhausted" if exhausted else "max_levels reached"
                raise TruncationNotConverged(
                    f"{where} at {available} levels for |z|={abs(z):g} "
                    f"({spectrum.label}); last term share {last_share:.3g}")

    log_raw = log_raw[:used]
    log_norm = float(logsumexp(log_raw))
    weights = np.exp(log_raw - log_norm)
    log_raw.flags.writeable = False
    weights.flags.writeable = False
    return StateWeights(z, log_raw, weights, log_norm, used, spectrum)


def _levels(state):
    return np.arange(state.levels_used, dtype=float)


def mean_number(state: StateWeights) -> float:
    return float(np.dot(_levels(state), state.weights))


def second_moment_number(state: StateWeights) -> float:
    n = _levels(state)
    return float(np.dot(n * n, state.weights))


def number_variance(state: StateWeights) -> float:
    n = _levels(state)
    mean = np.dot(n, state.weights)
    # centered form avoids cancellation at large |z|
    return float(np.dot((n - mean) ** 2, state.weights))


def mandel_q(state: StateWeights) -> float:
    """Mandel parameter ``Var(N)/<N> - 1``; returns the limit 0 at ``z = 0``."""
    mean = mean_number(state)
    if mean == 0.0:
        return 0.0
    return number_variance(state) / mean - 1.0


def ladder_expectations(state: StateWeights) -> tuple[float, float]:
    """Return ``(<A^dag A>, <A A^dag>)`` in the coherent state.

    With ``A|n> = sqrt(rho_n)|n-1>`` and
    ``A^dag|n> = (d_n/d_{n+1}) sqrt(rho_{n+1})|n+1>`` on level vectors of
    squared norm ``d_n``, the diagonal elements per unit norm are
    ``rho_n d_{n-1}/d_n`` and ``rho_{n+1} d_n/d_{n+1}``.
    """
    used = state.levels_used
    if len(state.spectrum) <= used:
        raise SpectrumTooShort(
            f"need level {used} beyond the truncation; spectrum has {len(state.spectrum)} levels")
    rho = state.spectrum.rho[: used + 1]
    deg = state.spectrum.degeneracy[: used + 1]
    w = state.weights
    lower = np.zeros(used)
    lower[1:] = rho[1:used] * deg[: used - 1] / deg[1:used]
    raise_ = rho[1:] * deg[:-1] / deg[1:]
    return float(np.dot(w, lower)), float(np.dot(w, raise_))


def quadrature_report(state: StateWeights) -> QuadratureReport:
    """Quadrature variances of ``X = (A + A^dag)/sqrt2`` and ``P = (A - A^dag)/(i sqrt2)``.

    Uses ``<A> = z`` and ``<A^2> = z^2`` (eigenstate of ``A``) plus the two
    normally/antinormally ordered expectations.
    """
    a_dag_a, a_a_dag = ladder_expectations(state)
    z = state.z
    z2 = z * z
    x2 = 0.5 * (2 * z2.real + a_a_dag + a_dag_a)
    p2 = -0.5 * (2 * z2.real - a_a_dag - a_dag_a)
    var_x = x2 - 2 * z.real**2
    var_p = p2 - 2 * z.imag**2
    comm = a_a_dag - a_dag_a
    trio = np.array([var_x, var_p, 0.5 * abs(comm)])
    mean = trio.mean()
    dev = float(np.max(np.abs(trio - mean)) / mean) if mean > 0 else 0.0
    return QuadratureReport(float(var_x), float(var_p), float(comm), dev)


def amplitudes(state: StateWeights) -> np.ndarray:
    """Normalized expansion coefficients ``z^n sqrt(d_n/[rho_n]!) / sqrt(N)``.

    Real for real ``z``, complex otherwise.
    """
    mag = np.sqrt(state.weights)
    if state.is_real:
        if state.z.real < 0:
            return mag * (-1.0) ** np.arange(state.levels_used)
        return mag.copy()
    phase = cmath.phase(state.z)
    return mag * np.exp(1j * phase * np.arange(state.levels_used))
