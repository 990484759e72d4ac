"""Systems made of mutually distinguishable sub-systems.

Three exchange regimes are supported:

``none``
    each sub-system keeps its own (N_i, U_i); weights multiply.
``energy``
    particle numbers N_i are fixed, energy flows between sub-systems.
``energy-and-particles``
    only the totals (N, U) are fixed.  Requires identical statistics.

More than two sub-systems are handled by folding the two-system rules
from the left.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .canonical import CanonicalContext, ThermoReport, series_thermo
from .grand_canonical import grand_log_product
from .microcanonical import WeightTable
from .oracle import check_stats
from .qseries import QSeries
from .spectrum import EnergyLevel, Spectrum, load_spectrum

MODES = ("none", "energy", "energy-and-particles")


@dataclass
class CompoundSystem:
    systems: list[tuple[Spectrum, str]]
    mode: str
    _tables: list[WeightTable] = field(init=False, repr=False)
    _contexts: list[CanonicalContext] = field(init=False, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len(self.systems) < 2:
            raise ValueError("a compound system needs at least two sub-systems")
        for _, stats in self.systems:
            check_stats(stats)
        if self.mode == "energy-and-particles" and len({st for _, st in self.systems}) != 1:
            raise ValueError("particle exchange requires all sub-systems to share one statistics")
        self._tables = [WeightTable(s, st) for s, st in self.systems]
        self._contexts = [CanonicalContext(s, st) for s, st in self.systems]

    @property
    def tables(self) -> list[WeightTable]:
        return self._tables

    @property
    def contexts(self) -> list[CanonicalContext]:
        return self._contexts

    def merged_spectrum(self) -> Spectrum:
        """Single spectrum with the union of levels and degeneracies added."""
        merged: dict[int, int] = {}
        for s, _ in self.systems:
            for lv in s.levels:
                merged[lv.energy] = merged.get(lv.energy, 0) + lv.degeneracy
        units = {s.unit for s, _ in self.systems}
        if len(units) != 1:
            raise ValueError("sub-systems are on different energy grids")
        return Spectrum(
            tuple(EnergyLevel(e, g) for e, g in sorted(merged.items())),
            units.pop(),
            "merged(" + ", ".join(s.label or str(s) for s, _ in self.systems) + ")",
        )

    def _energy_bound(self, i: int, n: int) -> int:
        return n * self.systems[i][0].max_energy

    # -- folded weight functions --------------------------------------------

    def _rest_energy_weights(self, skip: int, Ns: list[int], U: int) -> list[int]:
        """Energy-only convolution of all sub-systems except ``skip``: entry u
        is the number of joint configurations of the others at energy u."""
        acc = [1] + [0] * U
        for i, t in enumerate(self._tables):
            if i == skip:
                continue
            row = [t.weight(Ns[i], u) for u in range(U + 1)]
            new = [0] * (U + 1)
            for a, va in enumerate(acc):
                if va:
                    for b in range(U + 1 - a):
                        if row[b]:
                            new[a + b] += va * row[b]
            acc = new
        return acc

    def _rest_full_weights(self, skip: int, N: int, U: int) -> list[list[int]]:
        """Particle-and-energy convolution of all sub-systems except ``skip``."""
        acc = [[0] * (U + 1) for _ in range(N + 1)]
        acc[0][0] = 1
        for i, t in enumerate(self._tables):
            if i == skip:
                continue
            new = [[0] * (U + 1) for _ in range(N + 1)]
            for n1 in range(N + 1):
                for u1 in range(U + 1):
                    v1 = acc[n1][u1]
                    if not v1:
                        continue
                    for n2 in range(N + 1 - n1):
                        for u2 in range(U + 1 - u1):
                            w = t.weight(n2, u2)
                            if w:
                                new[n1 + n2][u1 + u2] += v1 * w
            acc = new
        return acc

    # -- public operations --------------------------------------------------

    def weight(self, *, allocation=None, particles=None, N=None, U=None) -> int:
        """Number of joint configurations.

        mode ``none``: ``allocation=[(N1, U1), (N2, U2), ...]``;
        mode ``energy``: ``particles=[N1, N2, ...]`` and total ``U``;
        mode ``energy-and-particles``: totals ``N`` and ``U``.
        """
        if self.mode == "none":
            alloc = self._allocation(allocation)
            out = 1
            for t, (n, u) in zip(self._tables, alloc):
                out *= t.weight(n, u)
            return out
        if self.mode == "energy":
            Ns = self._particles(particles)
            if U is None or U < 0:
                return 0
            return self._rest_energy_weights(-1, Ns, U)[U]
        if N is None or U is None or N < 0 or U < 0:
            return 0
        return self._rest_full_weights(-1, N, U)[N][U]

    def occupation_sum(self, energy: int, *, allocation=None, particles=None, N=None, U=None) -> int:
        """W * N_energy for the compound, an exact integer."""
        if not any(energy in s for s, _ in self.systems):
            raise ValueError(f"{energy} is not a level of any sub-system")
        if self.mode == "none":
            alloc = self._allocation(allocation)
            total = 0
            for i, t in enumerate(self._tables):
                others = 1
                for j, (tj, (n, u)) in enumerate(zip(self._tables, alloc)):
                    if j != i:
                        others *= tj.weight(n, u)
                n, u = alloc[i]
                total += t.occupation_sum(n, u, energy) * others
            return total
        if self.mode == "energy":
            Ns = self._particles(particles)
            if U is None or U < 0:
                return 0
            total = 0
            for i, t in enumerate(self._tables):
                rest = self._rest_energy_weights(i, Ns, U)
                for u in range(U + 1):
                    if rest[U - u]:
                        total += t.occupation_sum(Ns[i], u, energy) * rest[U - u]
            return total
        if N is None or U is None or N < 0 or U < 0:
            return 0
        total = 0
        for i, t in enumerate(self._tables):
            rest = self._rest_full_weights(i, N, U)
            for n in range(N + 1):
                for u in range(U + 1):
                    r = rest[N - n][U - u]
                    if r:
                        total += t.occupation_sum(n, u, energy) * r
        return total

    def occupancy(self, energy: int, **totals) -> Fraction:
        W = self.weight(**totals)
        M = self.occupation_sum(energy, **totals)
        return Fraction(M, W) if W else Fraction(0)

    def partition_function(self, N=None, particles=None) -> QSeries:
        """Z(q) of the compound.

        mode ``energy``: product of Z_i(N_i, q);
        mode ``energy-and-particles``: sum over splits of the total N.
        """
        if self.mode == "energy":
            Ns = self._particles(particles)
            Z = QSeries.one()
            for ctx, n in zip(self._contexts, Ns):
                Z = Z * ctx.partition_function(n)
            return Z
        if self.mode == "energy-and-particles":
            if N is None or N < 0:
                raise ValueError("total particle number N is required")
            # row[n] is the folded Z(n, q) of the sub-systems seen so far
            row = [self._contexts[0].partition_function(n) for n in range(N + 1)]
            for ctx in self._contexts[1:]:
                row = [
                    sum((row[n1] * ctx.partition_function(n - n1) for n1 in range(n + 1)), QSeries.zero())
                    for n in range(N + 1)
                ]
            return row[N]
        raise ValueError("with no exchange there is no compound partition function")

    def thermodynamics(self, q0: float, N=None, particles=None) -> ThermoReport:
        Z = self.partition_function(N=N, particles=particles)
        rep = series_thermo(Z, q0)
        rep.N = sum(self._particles(particles)) if self.mode == "energy" else N
        return rep

    def ln_grand_partition(self, z: float, q0: float) -> float:
        """ln of the product of sub-system grand partition functions."""
        if self.mode != "energy-and-particles":
            raise ValueError("a grand partition function needs particle exchange")
        return sum(grand_log_product(s, st, z, q0) for s, st in self.systems)

    def _allocation(self, allocation):
        if allocation is None or len(allocation) != len(self.systems):
            raise ValueError(f"need one (N, U) pair per sub-system ({len(self.systems)})")
        return [tuple(a) for a in allocation]

    def _particles(self, particles):
        if particles is None or len(particles) != len(self.systems):
            raise ValueError(f"need one particle number per sub-system ({len(self.systems)})")
        return list(particles)


def compound_weight(cs: CompoundSystem, **totals) -> int:
    return cs.weight(**totals)


def compound_occupancy(cs: CompoundSystem, energy: int, **totals) -> Fraction:
    return cs.occupancy(energy, **totals)


def compound_partition_function(cs: CompoundSystem, N=None, particles=None) -> QSeries:
    return cs.partition_function(N=N, particles=particles)


def load_compound(path) -> CompoundSystem:
    """Read a compound descriptor.

    ``{"mode": "...", "systems": [{"spectrum": "file.json" or {...}, "stats": "bose"}, ...]}``;
    relative spectrum paths resolve against the descriptor's directory.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        mode = data["mode"]
        entries = data["systems"]
    except (KeyError, TypeError):
        raise ValueError("compound descriptor needs 'mode' and 'systems'") from None
    systems = []
    for entry in entries:
        ref = entry.get("spectrum")
        if isinstance(ref, str):
            spec_path = Path(ref)
            if not spec_path.is_absolute():
                spec_path = path.parent / spec_path
            spectrum = load_spectrum(spec_path)
        elif isinstance(ref, dict):
            spectrum = Spectrum.from_json(ref)
        else:
            raise ValueError(f"bad spectrum reference {ref!r}")
        systems.append((spectrum, entry.get("stats")))
    return CompoundSystem(systems, mode)
