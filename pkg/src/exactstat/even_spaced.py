"""Non-degenerate evenly spaced levels 0, 1, ..., B.

Bosonic weights are restricted partition counts p(B, N, U): partitions of U
into at most N parts, none larger than B.  Fermionic weights reduce to the
same counts after removing the Pauli ground-state energy N(N-1)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .canonical import CanonicalContext
from .microcanonical import WeightTable
from .oracle import BOSE, FERMI, check_stats
from .qseries import QSeries, RationalFunction, pochhammer
from .spectrum import evenly_spaced_band


@dataclass(frozen=True)
class BandParams:
    B: int
    N: int

    @property
    def P(self) -> int:
        """Largest number of adjacent empty levels above a fermionic ground state."""
        return self.B - self.N + 1

    @property
    def U_min(self) -> int:
        return self.N * (self.N - 1) // 2

    def added_energy(self, U: int) -> int:
        return U - self.U_min


@lru_cache(maxsize=None)
def _p_row(B: int, N: int) -> tuple[int, ...]:
    """Coefficients p(B, N, 0..N*B), built with p(B, N, U) = p(B, N-1, U) + p(B-1, N, U-N).

    The second term counts partitions with exactly N parts: remove one from
    every part.  Uses the (B-1, N) row, so the table fills along both axes.
    """
    if N == 0 or B == 0:
        return (1,)
    prev_n = _p_row(B, N - 1)
    prev_b = _p_row(B - 1, N)
    row = [0] * (N * B + 1)
    for u, v in enumerate(prev_n):
        row[u] += v
    for u, v in enumerate(prev_b):
        row[u + N] += v
    return tuple(row)


def restricted_partition_count(B: int, N: int, U: int) -> int:
    """p(B, N, U); 0 outside 0 <= U <= N*B or for negative B, N."""
    if B < 0 or N < 0 or U < 0 or U > N * B:
        return 0
    return _p_row(B, N)[U]


def fermi_band_weight(B: int, N: int, U: int) -> int:
    """Fermionic weight on the band: p(B - N + 1, N, U - N(N-1)/2)."""
    if N < 0:
        return 0
    bp = BandParams(B, N)
    if bp.P < 0:
        return 0
    return restricted_partition_count(bp.P, N, bp.added_energy(U))


def bose_band_weight(B: int, N: int, U: int) -> int:
    return restricted_partition_count(B, N, U)


# -- microcanonical identities ---------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    params: tuple
    left: object
    right: object

    @property
    def passed(self) -> bool:
        return self.left == self.right


class _BandWeights:
    """W and M_k = W * N_k on the band, from the generic engine."""

    def __init__(self, B: int, stats: str):
        self.B = B
        self.table = WeightTable(evenly_spaced_band(B), stats)

    def W(self, N: int, U: int) -> int:
        return self.table.weight(N, U)

    def M(self, k: int, N: int, U: int) -> int:
        if k < 0 or k > self.B or N < 0 or U < 0:
            return 0
        return self.table.occupation_sum(N, U, k)


def micro_identity_suite(B: int, N: int, U: int, _cache: dict | None = None) -> list[IdentityCheck]:
    """Evaluate both sides of the band identities at (B, N, U), exactly.

    Covers the boson shift relation, its occupancy ladder for every
    0 <= k < B, the fermionic shift relation, the lowest-level fermionic
    relation, and the fermionic ladder for -1 <= k < B.
    """
    if _cache is None:
        _cache = {}
    for stats in (BOSE, FERMI):
        if (stats, B) not in _cache:
            _cache[stats, B] = _BandWeights(B, stats)
    bose, fermi = _cache[BOSE, B], _cache[FERMI, B]
    Wp, Mp = bose.W, bose.M
    Wm, Mm = fermi.W, fermi.M
    out = [
        IdentityCheck(
            "bose_shift", (B, N, U),
            Wp(N, U) - Wp(N - 1, U),
            Wp(N, U - N) - Wp(N - 1, U - N - B),
        )
    ]
    for k in range(B):
        out.append(IdentityCheck(
            "bose_ladder", (B, N, U, k),
            Wp(N, U) + Mp(k + 1, N, U) - Mp(k + 1, N, U + k + 1),
            Wp(N, U - N) + Mp(k, N, U - N) - Mp(k, N, U - N - B + k),
        ))
    out.append(IdentityCheck(
        "fermi_shift", (B, N, U),
        Wm(N, U) + Wm(N - 1, U - B - 1),
        Wm(N, U - N) + Wm(N - 1, U - N + 1),
    ))
    out.append(IdentityCheck(
        "fermi_lowest_level", (B, N, U),
        Mm(0, N, U) + Mm(0, N - 1, U - B - 1),
        Wm(N - 1, U - N + 1),
    ))
    for k in range(-1, B):
        out.append(IdentityCheck(
            "fermi_ladder", (B, N, U, k),
            Wm(N, U) - Mm(k + 1, N, U) + Mm(k + 1, N, U - B + k),
            Wm(N, U - N) - Mm(k, N, U - N) + Mm(k, N, U - N + 1 + k),
        ))
    return out


# -- canonical relations ---------------------------------------------------


def gaussian_partition_function(B: int, N: int, stats: str) -> QSeries:
    """Z(N, q) on the band as an exact Gaussian polynomial.

    Bosons: (q)_{B+N} / ((q)_B (q)_N).
    Fermions: q^{N(N-1)/2} (q)_{B+1} / ((q)_{B+1-N} (q)_N).
    """
    check_stats(stats)
    if B < 0 or N < 0:
        raise ValueError("B and N must be non-negative")
    if stats == BOSE:
        return pochhammer(B + N).exact_div(pochhammer(B) * pochhammer(N))
    if N > B + 1:
        raise ValueError(f"at most B + 1 = {B + 1} fermions fit on the band")
    poly = pochhammer(B + 1).exact_div(pochhammer(B + 1 - N) * pochhammer(N))
    return poly.shift(N * (N - 1) // 2)


def bose_band_recurrence(B: int, N: int) -> QSeries:
    """Z+(N) from Z+(N-1) via Z+(N) = (1 - q^{B+N}) / (1 - q^N) Z+(N-1)."""
    Z = QSeries.one()
    for n in range(1, N + 1):
        Z = (Z * QSeries({0: 1, B + n: -1})).exact_div(QSeries({0: 1, n: -1}))
    return Z


def _poly(coeffs: dict) -> QSeries:
    return QSeries(coeffs)


def occupancy_ladder_formal(B: int, N: int, stats: str) -> list[RationalFunction]:
    """Exact occupancies N_0 .. N_B as rational functions of q, climbed rung by rung.

    Fermions start from the closed form N_0 = (1 - q^N) / (1 - q^{B+1});
    bosons start from the generic canonical occupancy of level 0.
    """
    check_stats(stats)
    if stats == FERMI and N > B + 1:
        raise ValueError(f"at most B + 1 = {B + 1} fermions fit on the band")
    if N == 0:
        return [RationalFunction(QSeries.zero()) for _ in range(B + 1)]
    qN = _poly({N: 1})
    one_minus_qN = _poly({0: 1, N: -1})
    if stats == FERMI:
        ladder = [RationalFunction(one_minus_qN, _poly({0: 1, B + 1: -1}))]
    else:
        ctx = CanonicalContext(evenly_spaced_band(B), BOSE)
        ladder = [ctx.occupancy(N, 0)]
    for k in range(B):
        prev = ladder[-1]
        lead = _poly({k + 1: 1}) * one_minus_qN
        if stats == BOSE:
            # (1 - q^{k+1}) N_{k+1} = q^{k+1}(1 - q^N) - q^N (q^{k+1} - q^{B+1}) N_k
            mix = qN * _poly({k + 1: 1, B + 1: -1})
            rhs = RationalFunction(lead) - prev * mix
            ladder.append(rhs / _poly({0: 1, k + 1: -1}))
        else:
            # (q^{k+1} - q^{B+1}) N_{k+1} = q^{k+1}(1 - q^N) - q^N (1 - q^{k+1}) N_k
            mix = qN * _poly({0: 1, k + 1: -1})
            rhs = RationalFunction(lead) - prev * mix
            ladder.append(rhs / _poly({k + 1: 1, B + 1: -1}))
    return ladder


def occupancy_ladder_numeric(B: int, N: int, stats: str, q0: float) -> list[float]:
    """The same ladder evaluated step by step in floating point at q0."""
    check_stats(stats)
    if not 0 < q0 < 1:
        raise ValueError(f"q must lie in (0, 1), got {q0!r}")
    if stats == FERMI and N > B + 1:
        raise ValueError(f"at most B + 1 = {B + 1} fermions fit on the band")
    if N == 0:
        return [0.0] * (B + 1)
    qN = q0**N
    if stats == FERMI:
        ladder = [(1 - qN) / (1 - q0 ** (B + 1))]
    else:
        ladder = [CanonicalContext(evenly_spaced_band(B), BOSE).occupancy(N, 0, q0)]
    for k in range(B):
        qk1 = q0 ** (k + 1)
        if stats == BOSE:
            nxt = (qk1 * (1 - qN) - qN * (qk1 - q0 ** (B + 1)) * ladder[-1]) / (1 - qk1)
        else:
            nxt = (qk1 * (1 - qN) - qN * (1 - qk1) * ladder[-1]) / (qk1 - q0 ** (B + 1))
        ladder.append(nxt)
    return ladder


def occupancy_recursion_canonical(B: int, N: int, stats: str, q0: float | None = None):
    """Ladder of band occupancies: formal if ``q0`` is None, numeric otherwise."""
    if q0 is None:
        return occupancy_ladder_formal(B, N, stats)
    return occupancy_ladder_numeric(B, N, stats, q0)


# -- unbounded band ----------------------------------------------------------


def unbounded_limit(N: int, stats: str, cutoff: int) -> QSeries:
    """Z(N, q) for levels 0, 1, 2, ... : 1/(q)_N, times q^{N(N-1)/2} for fermions."""
    check_stats(stats)
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if N < 0:
        raise ValueError("N must be >= 0")
    series = pochhammer(N, cutoff).reciprocal(cutoff)
    if stats == FERMI:
        series = series.shift(N * (N - 1) // 2).truncate(cutoff)
    return series


def unbounded_tail_bound(N: int, q0: float, cutoff: int) -> float:
    """Upper bound on sum_{u >= cutoff} u^2 p_N(u) q0^u, using p_N(u) <= C(u+N-1, N-1).

    Covers the dropped tail of Z, q Z' and (q d/dq)^2 Z alike.
    """
    total = 0.0
    u = cutoff
    while True:
        t = (u * u + 1) * comb(u + N - 1, max(N - 1, 0)) * q0**u
        total += t
        if u > cutoff + 10 and t < 1e-30 * max(total, 1e-300):
            break
        if t == 0.0:
            break
        u += 1
    return total


def unbounded_cutoff(N: int, q0: float, tol: float = 1e-12) -> int:
    """Smallest cutoff whose dropped tail, bounded as above, is below ``tol``.

    Fermionic series are shifted by N(N-1)/2, so callers add that shift
    to keep the bosonic part of the comparison intact.
    """
    cutoff = 1
    while unbounded_tail_bound(N, q0, cutoff) >= tol:
        cutoff = cutoff * 2 if cutoff < 64 else cutoff + 32
    lo = max(1, cutoff // 2)
    for c in range(lo, cutoff + 1):
        if unbounded_tail_bound(N, q0, c) < tol:
            return c
    return cutoff


def partitions_at_most(N: int, U: int) -> int:
    """p_N(U): partitions of U into at most N parts."""
    return restricted_partition_count(U, N, U) if U >= 0 else 0


__all__ = [
    "BandParams",
    "IdentityCheck",
    "bose_band_recurrence",
    "bose_band_weight",
    "fermi_band_weight",
    "gaussian_partition_function",
    "micro_identity_suite",
    "occupancy_ladder_formal",
    "occupancy_ladder_numeric",
    "occupancy_recursion_canonical",
    "partitions_at_most",
    "restricted_partition_count",
    "unbounded_cutoff",
    "unbounded_limit",
    "unbounded_tail_bound",
]
