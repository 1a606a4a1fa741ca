"""Degenerate energy spectra: built-in physical systems and a plain-text format.

A spectrum is the ordered list of distinct energies ``rho_0 = 0 < rho_1 < ...``
together with the number of states sharing each energy.  Energies are in units
where hbar = omega = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: number of box levels tabulated in the original study of the 2D square box
BOX2D_TABLE_LEVELS = 23


class SpectrumError(ValueError):
    """Base class for invalid or unparseable spectra."""


class MalformedLine(SpectrumError):
    pass


class NonIncreasingEnergy(SpectrumError):
    pass


class ZeroDegeneracy(SpectrumError):
    pass


class EmptySpectrum(SpectrumError):
    pass


@dataclass(frozen=True)
class EnergyLevel:
    rho: float
    degeneracy: int

    def __post_init__(self):
        if not math.isfinite(self.rho) or self.rho < 0:
            raise NonIncreasingEnergy(f"energy must be finite and >= 0, got {self.rho}")
        if self.degeneracy < 1:
            raise ZeroDegeneracy(f"degeneracy must be >= 1, got {self.degeneracy}")


@dataclass(frozen=True)
class DegenerateSpectrum:
    """Immutable ordered spectrum ``(rho_n, d_n)`` with ``rho_0 = 0``.

    The arrays ``rho`` and ``degeneracy`` are cached read-only views used by
    the numerical modules.
    """

    levels: tuple[EnergyLevel, ...]
    label: str = "custom"
    rho: np.ndarray = field(init=False, repr=False, compare=False)
    degeneracy: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) == 0:
            raise EmptySpectrum("spectrum has no levels")
        if len(levels) < 2:
            raise EmptySpectrum("spectrum needs at least two levels")
        if levels[0].rho != 0.0:
            raise NonIncreasingEnergy(f"ground energy must be 0, got {levels[0].rho}")
        for prev, cur in zip(levels, levels[1:]):
            if not cur.rho > prev.rho:
                raise NonIncreasingEnergy(
                    f"energies must be strictly increasing: {prev.rho} then {cur.rho}")
        rho = np.array([lv.rho for lv in levels], dtype=float)
        deg = np.array([lv.degeneracy for lv in levels], dtype=float)
        rho.flags.writeable = False
        deg.flags.writeable = False
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "degeneracy", deg)

    def __len__(self):
        return len(self.levels)

    @property
    def integer_valued(self) -> bool:
        """True when every energy is an integer to within 1e-12."""
        return bool(np.all(np.abs(self.rho - np.round(self.rho)) < 1e-12))

    @classmethod
    def from_arrays(cls, rho, degeneracy, label="custom") -> "DegenerateSpectrum":
        return cls(tuple(EnergyLevel(float(r), int(d)) for r, d in zip(rho, degeneracy)), label)

    def truncated(self, level_count: int) -> "DegenerateSpectrum":
        return DegenerateSpectrum(self.levels[:level_count], self.label)


def _check_count(level_count):
    if int(level_count) != level_count or level_count < 2:
        raise ValueError(f"level_count must be an integer >= 2, got {level_count}")
    return int(level_count)


def build_box2d(level_count: int) -> DegenerateSpectrum:
    """Particle in a 2D square box, ``rho = n^2 + m^2 - 2`` with ``n, m >= 1``.

    Pairs are scanned on ``[1, L]^2`` and only sums ``E <= L^2 + 1`` are kept;
    such a sum forces both ``n, m <= L``, so every retained count is complete.
    ``L`` doubles until enough levels survive.
    """
    level_count = _check_count(level_count)
    side = 8
    while True:
        k = np.arange(1, side + 1, dtype=np.int64)
        sums = (k[:, None] ** 2 + k[None, :] ** 2).ravel()
        sums = sums[sums <= side * side + 1]
        energies, counts = np.unique(sums, return_counts=True)
        if len(energies) >= level_count:
            break
        side *= 2
    energies = energies[:level_count] - 2
    counts = counts[:level_count]
    return DegenerateSpectrum.from_arrays(energies, counts, label="box2d")


def build_ho3d(level_count: int) -> DegenerateSpectrum:
    level_count = _check_count(level_count)
    nu = np.arange(level_count)
    return DegenerateSpectrum.from_arrays(nu, (nu + 1) * (nu + 2) // 2, label="ho3d")


def build_ho2d(level_count: int) -> DegenerateSpectrum:
    level_count = _check_count(level_count)
    nu = np.arange(level_count)
    return DegenerateSpectrum.from_arrays(nu, nu + 1, label="ho2d")


def build_nondegenerate_ho(level_count: int) -> DegenerateSpectrum:
    """1D oscillator, ``rho_n = n`` and ``d_n = 1``; its coherent state is Glauber's."""
    level_count = _check_count(level_count)
    nu = np.arange(level_count)
    return DegenerateSpectrum.from_arrays(nu, np.ones_like(nu), label="glauber")


def degeneracy_oracle_box2d(rho: int) -> int:
    """Count ``(n, m)`` with ``n, m >= 1`` and ``n^2 + m^2 = rho + 2`` by direct scan."""
    if rho < 0:
        raise ValueError("rho must be >= 0")
    target = int(rho) + 2
    count = 0
    n = 1
    while n * n < target:
        rest = target - n * n
        m = math.isqrt(rest)
        if m >= 1 and m * m == rest:
            count += 1
        n += 1
    return count


def load_custom(source: str, label: str = "custom") -> DegenerateSpectrum:
    """Parse the text format: one ``<rho> <degeneracy>`` pair per line.

    Blank lines and lines starting with ``#`` are skipped.  A ``# system: name``
    header sets the label.  If the lowest energy is nonzero the whole spectrum
    is shifted down so that ``rho_0 = 0``.
    """
    rows = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            if key.strip() == "system" and value.strip():
                label = value.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(f"line {lineno}: expected '<rho> <degeneracy>', got {raw!r}")
        try:
            rho = float(parts[0])
            deg = float(parts[1])
        except ValueError:
            raise MalformedLine(f"line {lineno}: cannot parse {raw!r}") from None
        if not math.isfinite(rho) or not math.isfinite(deg) or deg != int(deg):
            raise MalformedLine(f"line {lineno}: cannot parse {raw!r}")
        if deg < 1:
            raise ZeroDegeneracy(f"line {lineno}: degeneracy must be >= 1, got {parts[1]}")
        rows.append((rho, int(deg)))
    if not rows:
        raise EmptySpectrum("no levels found")
    shift = rows[0][0]
    levels = []
    for rho, deg in rows:
        shifted = rho - shift
        if shifted < 0:
            raise NonIncreasingEnergy(f"energy {rho} lies below the first energy {shift}")
        levels.append(EnergyLevel(shifted, deg))
    return DegenerateSpectrum(tuple(levels), label)


def serialize(spectrum: DegenerateSpectrum) -> str:
    lines = [f"# system: {spectrum.label}", "# rho degeneracy"]
    for lv in spectrum.levels:
        lines.append(f"{lv.rho!r} {lv.degeneracy}")
    return "\n".join(lines) + "\n"


SYSTEMS = ("box2d", "box2d-23", "ho2d", "ho3d", "glauber")


def get_system(selector: str, level_count: int = 513) -> DegenerateSpectrum:
    """Resolve a system selector such as ``ho3d`` or ``custom:path/to/file``.

    ``box2d-23`` is the 23-level box spectrum exactly as tabulated in the
    literature; every other built-in is generated with ``level_count`` levels.
    """
    if selector.startswith("custom:"):
        path = Path(selector[len("custom:"):])
        return load_custom(path.read_text(encoding="utf-8"))
    builders = {
        "box2d": build_box2d,
        "ho2d": build_ho2d,
        "ho3d": build_ho3d,
        "glauber": build_nondegenerate_ho,
    }
    if selector == "box2d-23":
        spec = build_box2d(BOX2D_TABLE_LEVELS)
        return DegenerateSpectrum(spec.levels, "box2d-23")
    try:
        return builders[selector](level_count)
    except KeyError:
        raise ValueError(f"unknown system {selector!r}; choose from {SYSTEMS} or custom:<path>") from None
