"""Brute-force microstate enumeration.

This is the ground truth every recursion in the package is tested against.
Configurations are enumerated as per-level occupation vectors ``m``; each
vector stands for ``prod C(g + m - 1, m)`` bosonic or ``prod C(g, m)``
fermionic microstates.  The search is a depth-first walk over levels in
descending energy with pruning on the residual energy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

from .errors import BudgetExceeded
from .spectrum import Spectrum

DEFAULT_BUDGET = 10**8

BOSE = "bose"
FERMI = "fermi"


def check_stats(stats: str) -> str:
    if stats not in (BOSE, FERMI):
        raise ValueError(f"stats must be 'bose' or 'fermi', got {stats!r}")
    return stats


def multiplicity(m: int, g: int, stats: str) -> int:
    """Number of ways to put ``m`` particles into ``g`` degenerate states."""
    if stats == BOSE:
        return comb(g + m - 1, m)
    return comb(g, m)


@dataclass
class _Budget:
    limit: int
    used: int = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"enumeration exceeded its budget of {self.limit} nodes")


def configurations(
    s: Spectrum,
    stats: str,
    N: int | None,
    U: int,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield ``(occupations, multiplicity)`` for every configuration with energy U.

    ``occupations`` is indexed like ``s.levels``.  With ``N=None`` the
    particle number is unconstrained (chargeless counting), which requires
    a finite search: bosonic spectra may not contain level 0.
    """
    check_stats(stats)
    if U < 0 or (N is not None and N < 0):
        return
    if N is None and stats == BOSE and s.min_energy == 0:
        raise ValueError("chargeless bosons need a non-zero ground-state energy")
    levels = s.levels
    L = len(levels)
    # descending energy order; suffix minima/maxima drive the pruning
    order = list(range(L - 1, -1, -1))
    suffix_min = [0] * (L + 1)
    suffix_max = [0] * (L + 1)
    suffix_cap = [0] * (L + 1)
    for pos in range(L - 1, -1, -1):
        lv = levels[order[pos]]
        suffix_min[pos] = lv.energy if pos == L - 1 else min(lv.energy, suffix_min[pos + 1])
        suffix_max[pos] = lv.energy if pos == L - 1 else max(lv.energy, suffix_max[pos + 1])
        suffix_cap[pos] = lv.degeneracy + suffix_cap[pos + 1]
    occ = [0] * L
    tracker = _Budget(budget)

    def walk(pos: int, n_left, u_left: int, weight: int):
        tracker.tick()
        if pos == L:
            if u_left == 0 and (n_left is None or n_left == 0):
                yield tuple(occ), weight
            return
        if n_left is not None:
            if n_left * suffix_min[pos] > u_left or n_left * suffix_max[pos] < u_left:
                return
            if stats == FERMI and n_left > suffix_cap[pos]:
                return
        idx = order[pos]
        lv = levels[idx]
        top = lv.degeneracy if stats == FERMI else None
        m = 0
        while True:
            if top is not None and m > top:
                break
            if n_left is not None and m > n_left:
                break
            spent = m * lv.energy
            if spent > u_left:
                break
            occ[idx] = m
            yield from walk(
                pos + 1,
                None if n_left is None else n_left - m,
                u_left - spent,
                weight * multiplicity(m, lv.degeneracy, stats),
            )
            m += 1
        occ[idx] = 0

    yield from walk(0, N, U, 1)


def enumerate_counts(
    s: Spectrum, stats: str, N: int, U: int, budget: int = DEFAULT_BUDGET
) -> tuple[int, dict[int, int]]:
    """Return ``(W, M)`` where ``M[energy]`` is the total particle count at
    that level summed over all microstates, so occupancy = M / W."""
    W = 0
    M = {lv.energy: 0 for lv in s.levels}
    energies = s.energies
    for occ, mult in configurations(s, stats, N, U, budget):
        W += mult
        for e, m in zip(energies, occ):
            if m:
                M[e] += mult * m
    return W, M


def enumerate_weight(s: Spectrum, stats: str, N: int, U: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of (N, U)-microstates, found by exhaustive search."""
    return sum(mult for _, mult in configurations(s, stats, N, U, budget))


def enumerate_occupancy(
    s: Spectrum, stats: str, N: int, U: int, energy: int, budget: int = DEFAULT_BUDGET
) -> Fraction:
    if energy not in s:
        raise ValueError(f"{energy} is not a level of the spectrum")
    W, M = enumerate_counts(s, stats, N, U, budget)
    return Fraction(M[energy], W) if W else Fraction(0)


def enumerate_chargeless_weight(s: Spectrum, stats: str, U: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of U-microstates with the particle number left free."""
    return sum(mult for _, mult in configurations(s, stats, None, U, budget))


def enumerate_chargeless_counts(
    s: Spectrum, stats: str, U: int, budget: int = DEFAULT_BUDGET
) -> tuple[int, dict[int, int]]:
    W = 0
    M = {lv.energy: 0 for lv in s.levels}
    energies = s.energies
    for occ, mult in configurations(s, stats, None, U, budget):
        W += mult
        for e, m in zip(energies, occ):
            if m:
                M[e] += mult * m
    return W, M


def enumerate_table(
    s: Spectrum, stats: str, N_max: int, U_max: int, budget: int = DEFAULT_BUDGET
) -> tuple[dict[tuple[int, int], int], dict[tuple[int, int], dict[int, int]]]:
    """Tabulate W and M for every n <= N_max, u <= U_max in one sweep.

    Cheaper than calling :func:`enumerate_counts` cell by cell when a whole
    grid is wanted; the counting is the same brute force.
    """
    check_stats(stats)
    levels = s.levels
    L = len(levels)
    W: dict[tuple[int, int], int] = {}
    M: dict[tuple[int, int], dict[int, int]] = {}
    occ = [0] * L
    tracker = _Budget(budget)

    def walk(i: int, n: int, u: int, weight: int):
        tracker.tick()
        if i == L:
            key = (n, u)
            W[key] = W.get(key, 0) + weight
            row = M.setdefault(key, {lv.energy: 0 for lv in levels})
            for lv, m in zip(levels, occ):
                if m:
                    row[lv.energy] += weight * m
            return
        lv = levels[i]
        top = min(N_max - n, lv.degeneracy if stats == FERMI else N_max)
        for m in range(top + 1):
            if u + m * lv.energy > U_max:
                break
            occ[i] = m
            walk(i + 1, n + m, u + m * lv.energy, weight * multiplicity(m, lv.degeneracy, stats))
        occ[i] = 0

    walk(0, 0, 0, 1)
    return W, M
