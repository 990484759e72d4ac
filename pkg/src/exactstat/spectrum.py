"""One-particle energy spectra on an integer energy grid.

Every downstream computation is exact, so energies are stored as
non-negative integers in units of ``Spectrum.unit``.  Rational inputs are
rescaled onto the grid by their least common denominator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Iterator


@dataclass(frozen=True, order=True)
class EnergyLevel:
    energy: int
    degeneracy: int

    def __post_init__(self):
        if not isinstance(self.energy, int) or self.energy < 0:
            raise ValueError(f"energy must be a non-negative integer, got {self.energy!r}")
        if not isinstance(self.degeneracy, int) or self.degeneracy < 1:
            raise ValueError(f"degeneracy must be a positive integer, got {self.degeneracy!r}")


@dataclass(frozen=True)
class Spectrum:
    """Immutable list of distinct energy levels sorted ascending."""

    levels: tuple[EnergyLevel, ...]
    unit: Fraction = Fraction(1)
    label: str = ""
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        levels = tuple(self.levels)
        if not levels:
            raise ValueError("a spectrum needs at least one level")
        for a, b in zip(levels, levels[1:]):
            if a.energy >= b.energy:
                raise ValueError("level energies must be distinct and sorted ascending")
        unit = Fraction(self.unit)
        if unit <= 0:
            raise ValueError("unit must be positive")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "_index", {lv.energy: lv.degeneracy for lv in levels})

    def __iter__(self) -> Iterator[EnergyLevel]:
        return iter(self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def __contains__(self, energy) -> bool:
        return energy in self._index

    def __hash__(self):
        return hash((self.levels, self.unit, self.label))

    @property
    def energies(self) -> tuple[int, ...]:
        return tuple(lv.energy for lv in self.levels)

    @property
    def degeneracies(self) -> tuple[int, ...]:
        return tuple(lv.degeneracy for lv in self.levels)

    @property
    def min_energy(self) -> int:
        return self.levels[0].energy

    @property
    def max_energy(self) -> int:
        return self.levels[-1].energy

    @property
    def state_count(self) -> int:
        return sum(lv.degeneracy for lv in self.levels)

    def degeneracy(self, energy: int) -> int:
        """Degeneracy of ``energy``, or 0 if it is not a level."""
        return self._index.get(energy, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self._index)

    def to_json(self) -> dict:
        return {
            "unit": str(self.unit),
            "label": self.label,
            "levels": [{"energy": lv.energy, "g": lv.degeneracy} for lv in self.levels],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Spectrum":
        """Parse the JSON spectrum layout; rejects unsorted or duplicate energies."""
        try:
            raw = data["levels"]
        except (KeyError, TypeError):
            raise ValueError("spectrum JSON needs a 'levels' list") from None
        levels = []
        for item in raw:
            try:
                energy, g = item["energy"], item["g"]
            except (KeyError, TypeError):
                raise ValueError(f"malformed level entry {item!r}") from None
            if isinstance(energy, bool) or isinstance(g, bool):
                raise ValueError(f"malformed level entry {item!r}")
            levels.append(EnergyLevel(energy, g))
        return cls(tuple(levels), Fraction(data.get("unit", "1")), data.get("label", ""))

    def __str__(self):
        body = ", ".join(f"{lv.energy}:{lv.degeneracy}" for lv in self.levels)
        return "{" + body + "}"


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        # repr gives the shortest decimal that round-trips, so 0.1 -> 1/10
        return Fraction(repr(x))
    if isinstance(x, (Rational, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational energy")


def from_levels(pairs: Iterable[tuple], label: str = "") -> Spectrum:
    """Build a spectrum from ``(energy, degeneracy)`` pairs.

    Energies may be any non-negative rationals (floats are read through
    their shortest decimal repr). They are rescaled by the least common
    denominator onto an integer grid, duplicates are merged by summing
    degeneracies, and the grid step is recorded as ``unit``.

    >>> s = from_levels([(0.5, 1), (1.0, 2)])
    >>> s.as_dict(), s.unit
    ({1: 1, 2: 2}, Fraction(1, 2))
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("empty level list")
    parsed = []
    for energy, g in pairs:
        e = _as_fraction(energy)
        if e < 0:
            raise ValueError(f"negative energy {energy!r}")
        if isinstance(g, bool) or int(g) != g or g < 1:
            raise ValueError(f"degeneracy must be a positive integer, got {g!r}")
        parsed.append((e, int(g)))
    lcd = 1
    for e, _ in parsed:
        lcd = lcd * e.denominator // math.gcd(lcd, e.denominator)
    merged: dict[int, int] = {}
    for e, g in parsed:
        k = int(e * lcd)
        merged[k] = merged.get(k, 0) + g
    levels = tuple(EnergyLevel(e, g) for e, g in sorted(merged.items()))
    return Spectrum(levels, Fraction(1, lcd), label)


def magnetic_example(energy_cap: int) -> Spectrum:
    """Levels ``2k - 1 + l**2`` (k, l >= 1) up to ``energy_cap``.

    The degeneracy of a level is the number of (k, l) pairs landing on it.
    """
    if energy_cap < 2:
        raise ValueError("energy_cap must be at least 2 (lowest level is 2)")
    counts: dict[int, int] = {}
    l = 1
    while l * l + 1 <= energy_cap:
        k = 1
        while 2 * k - 1 + l * l <= energy_cap:
            e = 2 * k - 1 + l * l
            counts[e] = counts.get(e, 0) + 1
            k += 1
        l += 1
    levels = tuple(EnergyLevel(e, g) for e, g in sorted(counts.items()))
    return Spectrum(levels, Fraction(1), f"magnetic(cap={energy_cap})")


def harmonic_oscillator(d: int, k_max: int) -> Spectrum:
    """Isotropic d-dimensional oscillator, levels k = 0..k_max.

    Degeneracy is C(k + d - 1, d - 1). The zero-point energy d/2 is dropped;
    the label records the shift.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    levels = tuple(EnergyLevel(k, math.comb(k + d - 1, d - 1)) for k in range(k_max + 1))
    return Spectrum(levels, Fraction(1), f"oscillator(d={d}, k_max={k_max}, shift=-{Fraction(d, 2)})")


def evenly_spaced_band(B: int) -> Spectrum:
    """Non-degenerate levels 0, 1, ..., B."""
    if B < 0:
        raise ValueError("B must be >= 0")
    return Spectrum(tuple(EnergyLevel(k, 1) for k in range(B + 1)), Fraction(1), f"band(B={B})")


def load_spectrum(path) -> Spectrum:
    with open(Path(path), encoding="utf-8") as fh:
        return Spectrum.from_json(json.load(fh))


def save_spectrum(spectrum: Spectrum, path) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump(spectrum.to_json(), fh, indent=2)
        fh.write("\n")
