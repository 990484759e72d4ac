"""Exact microcanonical weights and occupancies.

Weights are big integers obtained from signed recursions over the particle
number (or the energy) with memoization.  Every division that the
recursions perform is exact in theory; it is checked, not trusted.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import ConsistencyError
from .oracle import BOSE, FERMI, check_stats
from .spectrum import Spectrum


def _exact_div(total: int, d: int, what: str) -> int:
    q, r = divmod(total, d)
    if r:
        raise ConsistencyError(f"{what}: signed sum {total} not divisible by {d}")
    return q


class WeightTable:
    """Memoized statistical weights W(N, U) for one spectrum and statistics.

    ``weight`` runs the particle-number recursion; ``weight_energy_recursion``
    runs the energy recursion with its own memo, so the two paths are
    independent checks of one another.  Tables are safe to share between
    threads: each public call holds a re-entrant lock while filling the memo.
    """

    def __init__(self, spectrum: Spectrum, stats: str):
        self.spectrum = spectrum
        self.stats = check_stats(stats)
        self.sign = 1 if stats == BOSE else -1
        self._levels = [(lv.energy, lv.degeneracy) for lv in spectrum.levels]
        self._emin = spectrum.min_energy
        self._emax = spectrum.max_energy
        self._states = spectrum.state_count
        self._memo: dict[tuple[int, int], int] = {(0, 0): 1}
        self._memo_energy: dict[tuple[int, int], int] = {}
        self._lock = threading.RLock()

    def _trivially_zero(self, N: int, U: int) -> bool:
        if N < 0 or U < 0:
            return True
        if U > N * self._emax or U < N * self._emin:
            return True
        return self.stats == FERMI and N > self._states

    def weight(self, N: int, U: int) -> int:
        if self._trivially_zero(N, U):
            return 0
        key = (N, U)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        with self._lock:
            return self._weight(N, U)

    def _weight(self, N: int, U: int) -> int:
        if self._trivially_zero(N, U):
            return 0
        key = (N, U)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        total = 0
        sign = 1
        for n in range(1, N + 1):
            inner = 0
            for e, g in self._levels:
                rest = U - n * e
                if rest < 0:
                    break
                inner += g * self._weight(N - n, rest)
            total += sign * inner
            sign *= self.sign
        value = _exact_div(total, N, f"W({N},{U})")
        self._memo[key] = value
        return value

    def weight_energy_recursion(self, N: int, U: int) -> int:
        """Same W(N, U), reached through the recursion that divides by U.

        At U = 0 the energy recursion is undefined and the particle-number
        path is used instead.
        """
        if self._trivially_zero(N, U):
            return 0
        with self._lock:
            return self._weight_u(N, U)

    def _weight_u(self, N: int, U: int) -> int:
        if self._trivially_zero(N, U):
            return 0
        if U == 0:
            return self._weight(N, 0)
        key = (N, U)
        hit = self._memo_energy.get(key)
        if hit is not None:
            return hit
        total = 0
        sign = 1
        for n in range(1, N + 1):
            inner = 0
            for e, g in self._levels:
                if e == 0:
                    continue
                rest = U - n * e
                if rest < 0:
                    break
                inner += e * g * self._weight_u(N - n, rest)
            total += sign * inner
            sign *= self.sign
        value = _exact_div(total, U, f"W({N},{U}) via energy recursion")
        self._memo_energy[key] = value
        return value

    def _check_level(self, energy: int) -> int:
        g = self.spectrum.degeneracy(energy)
        if not g:
            raise ValueError(f"{energy} is not a level of the spectrum")
        return g

    def occupation_sum(self, N: int, U: int, energy: int) -> int:
        """M(N, U) = W(N, U) * N_energy(N, U): particles at ``energy`` summed
        over all microstates.  Always an integer; 0 off the spectrum."""
        g = self.spectrum.degeneracy(energy)
        if not g or N <= 0:
            return 0
        total = 0
        sign = 1
        top = N if energy == 0 else min(N, U // energy) if U >= 0 else 0
        for n in range(1, top + 1):
            total += sign * self.weight(N - n, U - n * energy)
            sign *= self.sign
        return g * total

    def occupancy(self, N: int, U: int, energy: int) -> Fraction:
        self._check_level(energy)
        W = self.weight(N, U)
        if W == 0:
            return Fraction(0)
        return Fraction(self.occupation_sum(N, U, energy), W)

    def occupancy_step(self, N: int, U: int, energy: int) -> Fraction:
        """Occupancy from the one-step recursion in N.

        N_e(N, U) = W(N-1, U-e) / W(N, U) * (g +- N_e(N-1, U-e))
        """
        g = self._check_level(energy)
        value = Fraction(0)
        # unroll from the bottom of the chain upward
        chain = []
        n, u = N, U
        while n > 0 and u >= 0:
            chain.append((n, u))
            n, u = n - 1, u - energy
        for n, u in reversed(chain):
            W = self.weight(n, u)
            if W == 0:
                value = Fraction(0)
                continue
            value = Fraction(self.weight(n - 1, u - energy), W) * (g + self.sign * value)
        return value

    def occupancies(self, N: int, U: int) -> dict[int, Fraction]:
        return {e: self.occupancy(N, U, e) for e, _ in self._levels}

    def entropy(self, N: int, U: int) -> float:
        """Boltzmann entropy ln W(N, U)."""
        W = self.weight(N, U)
        if W == 0:
            raise ValueError(f"no ({N},{U}) microstate exists; entropy is undefined")
        return math.log(W)


def entropy_micro(table: WeightTable, N: int, U: int) -> float:
    return table.entropy(N, U)


class ChargelessWeightTable:
    """Weights W(U) with the particle number left free (photons, phonons)."""

    def __init__(self, spectrum: Spectrum, stats: str):
        self.stats = check_stats(stats)
        if stats == BOSE and spectrum.min_energy == 0:
            raise ValueError(
                "chargeless bosons need a non-zero ground-state energy; "
                "the spectrum contains level 0"
            )
        self.spectrum = spectrum
        self.sign = 1 if stats == BOSE else -1
        self._levels = [(lv.energy, lv.degeneracy) for lv in spectrum.levels]
        # a fermionic level 0 of degeneracy g contributes 2**g empty-energy states
        self._w0 = 2 ** spectrum.degeneracy(0) if stats == FERMI else 1
        self._memo: dict[int, int] = {0: self._w0}
        self._lock = threading.RLock()

    def weight(self, U: int) -> int:
        if U < 0:
            return 0
        hit = self._memo.get(U)
        if hit is not None:
            return hit
        with self._lock:
            # fill bottom-up so the recursion depth stays flat
            for u in range(1, U + 1):
                if u not in self._memo:
                    self._memo[u] = self._compute(u)
        return self._memo[U]

    def _compute(self, U: int) -> int:
        total = 0
        for e, g in self._levels:
            if e == 0:
                continue
            if e > U:
                break
            inner = 0
            sign = 1
            for n in range(1, U // e + 1):
                inner += sign * self._memo[U - n * e]
                sign *= self.sign
            total += e * g * inner
        return _exact_div(total, U, f"W({U}) chargeless")

    def occupation_sum(self, U: int, energy: int) -> Fraction | int:
        g = self.spectrum.degeneracy(energy)
        if not g:
            raise ValueError(f"{energy} is not a level of the spectrum")
        if U < 0:
            return 0
        if energy == 0:
            # only fermions reach here; each zero-energy state is filled half the time
            return Fraction(g * self.weight(U), 2)
        total = 0
        sign = 1
        for n in range(1, U // energy + 1):
            total += sign * self.weight(U - n * energy)
            sign *= self.sign
        return g * total

    def occupancy(self, U: int, energy: int) -> Fraction:
        M = self.occupation_sum(U, energy)
        W = self.weight(U)
        if W == 0:
            return Fraction(0)
        return Fraction(M) / W

    def occupancies(self, U: int) -> dict[int, Fraction]:
        return {e: self.occupancy(U, e) for e, _ in self._levels}


def chargeless_weight(table: ChargelessWeightTable, U: int) -> int:
    return table.weight(U)


def chargeless_occupancy(table: ChargelessWeightTable, U: int, energy: int) -> Fraction:
    return table.occupancy(U, energy)
