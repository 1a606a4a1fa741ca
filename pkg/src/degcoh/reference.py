"""Fixed-truncation multiprecision reference sums.

Everything here works with mpmath at ``dps`` digits and forms the series terms
as explicit products ``|z|^{2n} d_n / (rho_1 rho_2 ... rho_n)``.  There is no
log-space arithmetic and no adaptive stopping, so it shares no code path with
:mod:`degcoh.state`.  Slow by design; used for cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .spectrum import DegenerateSpectrum


@dataclass(frozen=True)
class ReferenceMoments:
    normalization: mpmath.mpf
    mean: mpmath.mpf
    second: mpmath.mpf

    @property
    def variance(self):
        return self.second - self.mean**2

    @property
    def mandel(self):
        return self.variance / self.mean - 1


def terms(spectrum: DegenerateSpectrum, z, levels: int, dps: int = 60):
    """Unnormalized series terms ``t_n`` for ``n < levels`` as mpf values."""
    with mpmath.workdps(dps):
        r2 = abs(mpmath.mpc(z)) ** 2
        out = []
        fact = mpmath.mpf(1)
        power = mpmath.mpf(1)
        for n in range(min(levels, len(spectrum))):
            lv = spectrum.levels[n]
            if n > 0:
                fact *= mpmath.mpf(lv.rho)
                power *= r2
            out.append(power * lv.degeneracy / fact)
        return out


def moments(spectrum: DegenerateSpectrum, z, levels: int, dps: int = 60) -> ReferenceMoments:
    with mpmath.workdps(dps):
        t = terms(spectrum, z, levels, dps)
        norm = mpmath.fsum(t)
        mean = mpmath.fsum(n * tn for n, tn in enumerate(t)) / norm
        second = mpmath.fsum(n * n * tn for n, tn in enumerate(t)) / norm
        return ReferenceMoments(norm, mean, second)


def _normalized_amplitudes(spectrum, z, levels, dps):
    t = terms(spectrum, z, levels, dps)
    norm = mpmath.fsum(t)
    sign = 1 if z >= 0 else -1
    amp = [mpmath.sqrt(tn / norm) * sign**n for n, tn in enumerate(t)]
    rho = [mpmath.mpf(lv.rho) for lv in spectrum.levels[: len(t)]]
    return amp, rho


def _density(amp, rho, theta, gamma):
    cross = mpmath.fsum(
        amp[n] * amp[k] * mpmath.cos((n - k) * theta) * mpmath.cos((rho[n] - rho[k]) * gamma)
        for n in range(len(amp)) for k in range(n)
    )
    return (1 + 2 * cross) / (2 * mpmath.pi)


def gk_density(spectrum: DegenerateSpectrum, z: float, levels: int, theta, gamma, dps: int = 40):
    """Expanded double sum ``P(theta, gamma)`` evaluated pair by pair."""
    with mpmath.workdps(dps):
        amp, rho = _normalized_amplitudes(spectrum, z, levels, dps)
        return _density(amp, rho, mpmath.mpf(theta), mpmath.mpf(gamma))


def gk_phase_entropy(spectrum: DegenerateSpectrum, z: float, levels: int, gamma,
                     points: int = 256, dps: int = 30):
    """``-int P ln P`` by the periodic trapezoid rule, spectrally accurate for smooth P."""
    with mpmath.workdps(dps):
        amp, rho = _normalized_amplitudes(spectrum, z, levels, dps)
        gamma = mpmath.mpf(gamma)
        h = 2 * mpmath.pi / points
        total = mpmath.mpf(0)
        for j in range(points):
            p = _density(amp, rho, -mpmath.pi + j * h, gamma)
            if p > 0:
                total += p * mpmath.log(p)
        return -total * h
