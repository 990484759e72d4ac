"""Boson/fermion relations, used as independent cross-checks.

Fermionic weights are rebuilt from bosonic ones by inclusion-exclusion over
doubly occupied states; the canonical and grand-canonical analogues are
checked as exact polynomial or numeric identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from math import comb

from .canonical import CanonicalContext
from .errors import ConsistencyError
from .grand_canonical import grand_log_product
from .microcanonical import WeightTable
from .oracle import BOSE, FERMI
from .qseries import QSeries
from .spectrum import Spectrum

GRAND_TOL = 1e-10


@dataclass
class IdentityReport:
    name: str
    params: dict
    left: object
    right: object
    passed: bool

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, QSeries):
                return v.to_json()
            return v

        return {
            "identity": self.name,
            "params": self.params,
            "left": enc(self.left),
            "right": enc(self.right),
            "pass": self.passed,
        }


class FermiFromBose:
    """W-(N, U) from bosonic weights and smaller fermionic weights only.

    W-(N, U) = sum_{n <= N/2} (-1)^n sum_{u <= U/2} W-(n, u) W+(N - 2n, U - 2u)
    """

    def __init__(self, spectrum: Spectrum, bose: WeightTable | None = None):
        self.spectrum = spectrum
        self.bose = bose or WeightTable(spectrum, BOSE)
        self._memo: dict[tuple[int, int], int] = {}

    def weight(self, N: int, U: int) -> int:
        if N < 0 or U < 0:
            return 0
        if N == 0:
            return 1 if U == 0 else 0
        key = (N, U)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        total = self.bose.weight(N, U)  # the n = 0 term
        for n in range(1, N // 2 + 1):
            inner = 0
            for u in range(U // 2 + 1):
                wm = self.weight(n, u)
                if wm:
                    inner += wm * self.bose.weight(N - 2 * n, U - 2 * u)
            total += (-1) ** n * inner
        self._memo[key] = total
        return total


def fermi_weight_from_bose(s: Spectrum, N: int, U: int) -> int:
    return FermiFromBose(s).weight(N, U)


def fermi_weight_subset_sum(s: Spectrum, N: int, U: int, bose: WeightTable | None = None) -> int:
    """W-(N, U) as a signed sum over sets E of one-particle states:
    sum_E (-1)^|E| W+(N - 2|E|, U - 2 sum_{E} e).

    States sharing a level are grouped: choosing j of the g states at level
    e gives C(g, j) sets with identical contributions.
    """
    if len(s) > 12:
        raise ValueError("subset-sum form is limited to spectra with at most 12 levels")
    if N < 0 or U < 0:
        return 0
    bose = bose or WeightTable(s, BOSE)
    levels = s.levels
    half = N // 2
    total = 0
    for picks in product(*(range(min(lv.degeneracy, half) + 1) for lv in levels)):
        size = sum(picks)
        if size > half:
            continue
        energy = sum(j * lv.energy for j, lv in zip(picks, levels))
        if 2 * energy > U:
            continue
        ways = 1
        for j, lv in zip(picks, levels):
            ways *= comb(lv.degeneracy, j)
        total += (-1) ** size * ways * bose.weight(N - 2 * size, U - 2 * energy)
    return total


def _signed(poly: QSeries, sign: int) -> QSeries:
    return poly if sign > 0 else -poly


def canonical_duality_suite(s: Spectrum, N_max: int, cutoff: int | None = None) -> list[IdentityReport]:
    """Check, for N = 1..N_max, as exact polynomial identities:

    * Z-(N, q) = sum_n (-1)^n Z+(N - 2n, q) Z-(n, q^2)
    * 0 = sum_n (-1)^n Z+(n, q) Z-(N - n, q)
    * Z+(N, q) = sum_n Z-(N - 2n, q) Z+(n, q^2)
    """
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    bose = CanonicalContext(s, BOSE, cutoff)
    fermi = CanonicalContext(s, FERMI, cutoff)
    Zp, Zm = bose.partition_function, fermi.partition_function

    def at_q2(poly: QSeries) -> QSeries:
        out = poly.substitute_power(2)
        return out if cutoff is None else out.truncate(cutoff)

    reports = []
    for N in range(1, N_max + 1):
        rhs = QSeries.zero(cutoff)
        for n in range(N // 2 + 1):
            rhs = rhs + _signed(Zp(N - 2 * n) * at_q2(Zm(n)), (-1) ** n)
        left = Zm(N)
        reports.append(IdentityReport("fermi_from_bose_canonical", {"N": N}, left, rhs, left == rhs))

        alt = QSeries.zero(cutoff)
        for n in range(N + 1):
            alt = alt + _signed(Zp(n) * Zm(N - n), (-1) ** n)
        zero = QSeries.zero(cutoff)
        reports.append(IdentityReport("alternating_product", {"N": N}, alt, zero, alt == zero))

        rhs = QSeries.zero(cutoff)
        for n in range(N // 2 + 1):
            rhs = rhs + Zm(N - 2 * n) * at_q2(Zp(n))
        left = Zp(N)
        reports.append(IdentityReport("bose_from_fermi_canonical", {"N": N}, left, rhs, left == rhs))
    return reports


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= GRAND_TOL * max(1.0, abs(a), abs(b))


def grand_duality_check(s: Spectrum, z: float, q0: float) -> list[IdentityReport]:
    """Numeric grand-canonical identities at (z, q0), compared as logarithms:

    * Z-(z, q) = Z+(z, q) Z-(-z^2, q^2)
    * 1 = Z+(z, q) Z-(-z, q)
    * Z+(z, q) = Z-(z, q) Z+(z^2, q^2)
    """
    if not (z > 0 and 0 < q0 < 1):
        raise ValueError("need z > 0 and 0 < q < 1")
    if z * q0**s.min_energy >= 1:
        raise ValueError("bosonic factors diverge at this (z, q)")

    def lnZ(stats, zz, qq):
        return grand_log_product(s, stats, zz, qq)

    params = {"z": z, "q": q0}
    out = []
    left = lnZ(FERMI, z, q0)
    right = lnZ(BOSE, z, q0) + lnZ(FERMI, -z * z, q0 * q0)
    out.append(IdentityReport("fermi_from_bose_grand", params, math.exp(left), math.exp(right), _close(left, right)))
    left = 0.0
    right = lnZ(BOSE, z, q0) + lnZ(FERMI, -z, q0)
    out.append(IdentityReport("inverse_pair_grand", params, 1.0, math.exp(right), _close(left, right)))
    left = lnZ(BOSE, z, q0)
    right = lnZ(FERMI, z, q0) + lnZ(BOSE, z * z, q0 * q0)
    out.append(IdentityReport("bose_from_fermi_grand", params, math.exp(left), math.exp(right), _close(left, right)))
    return out


def micro_duality_suite(s: Spectrum, N_max: int, U_max: int) -> list[IdentityReport]:
    """Compare direct fermionic weights with both inclusion-exclusion forms."""
    fermi = WeightTable(s, FERMI)
    bose = WeightTable(s, BOSE)
    rebuild = FermiFromBose(s, bose)
    out = []
    for N in range(N_max + 1):
        for U in range(U_max + 1):
            direct = fermi.weight(N, U)
            via = rebuild.weight(N, U)
            out.append(IdentityReport("fermi_from_bose_micro", {"N": N, "U": U}, direct, via, direct == via))
            if len(s) <= 12:
                sub = fermi_weight_subset_sum(s, N, U, bose)
                out.append(IdentityReport("fermi_subset_sum_micro", {"N": N, "U": U}, direct, sub, direct == sub))
    return out


def require(reports: list[IdentityReport]) -> None:
    bad = [r for r in reports if not r.passed]
    if bad:
        raise ConsistencyError(f"{len(bad)} identities failed, first: {bad[0].name} {bad[0].params}")
