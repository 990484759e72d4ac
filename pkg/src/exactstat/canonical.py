"""Canonical ensemble: partition polynomials, occupancies, thermodynamics.

Temperature enters only through q = exp(-1/T) with k_B = 1 and energies in
grid units.  Partition functions are built as exact polynomials in q and
evaluated at the requested q only at the end, with rational arithmetic, so
numeric results carry no cancellation error from the recursions.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator

from .errors import ConsistencyError
from .numeric import DEFAULT_SERIES_CAP, log_fraction, sum_series, temperature
from .oracle import BOSE, FERMI, check_stats
from .qseries import QSeries, RationalFunction
from .spectrum import Spectrum


@dataclass
class ThermoReport:
    N: float
    q: float
    T: float
    Z: float
    U: float
    VarU: float
    c: float
    S: float
    occupancy: dict[int, float] = field(default_factory=dict)
    z: float | None = None
    mu: float | None = None

    def to_json(self) -> dict:
        out = {
            "N": self.N,
            "q": self.q,
            "T": self.T,
            "Z": self.Z,
            "U": self.U,
            "VarU": self.VarU,
            "c": self.c,
            "S": self.S,
            "occupancy": [{"energy": e, "n": n} for e, n in sorted(self.occupancy.items())],
        }
        if self.z is not None:
            out["z"] = self.z
            out["mu"] = self.mu
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ThermoReport":
        return cls(
            N=data["N"], q=data["q"], T=data["T"], Z=data["Z"], U=data["U"],
            VarU=data["VarU"], c=data["c"], S=data["S"],
            occupancy={row["energy"]: row["n"] for row in data["occupancy"]},
            z=data.get("z"), mu=data.get("mu"),
        )


def _divide_coefficients(poly: QSeries, n: int, what: str) -> QSeries:
    out = {}
    for e, v in poly.items():
        if isinstance(v, int):
            qt, r = divmod(v, n)
            if r:
                raise ConsistencyError(f"{what}: coefficient {v} of q^{e} not divisible by {n}")
            out[e] = qt
        else:
            out[e] = v / n
    return QSeries(out, poly.cutoff)


def partitions(n: int, max_part: int | None = None) -> Iterator[list[int]]:
    """Unrestricted partitions of n as non-increasing lists."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield []
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


class CanonicalContext:
    """Caches Z(n, q) and derived polynomials for one spectrum and statistics.

    ``cutoff`` truncates every series; leave it ``None`` for exact
    polynomials (always possible, since spectra are finite).
    """

    def __init__(self, spectrum: Spectrum, stats: str, cutoff: int | None = None):
        self.spectrum = spectrum
        self.stats = check_stats(stats)
        self.sign = 1 if stats == BOSE else -1
        self.cutoff = cutoff
        self._z1 = QSeries({lv.energy: lv.degeneracy for lv in spectrum.levels}, cutoff)
        self._z1_sub: dict[int, QSeries] = {}
        self._dz1_sub: dict[int, QSeries] = {}
        self._Z: dict[int, QSeries] = {0: QSeries.one(cutoff)}
        self._dZ: dict[int, QSeries] = {0: QSeries.zero(None if cutoff is None else cutoff - 1)}
        self._lock = threading.RLock()

    # -- one-particle building blocks -----------------------------------

    def z1(self) -> QSeries:
        return self._z1

    def z1_at_power(self, n: int) -> QSeries:
        """Z(1, q**n), truncated to the context cutoff."""
        hit = self._z1_sub.get(n)
        if hit is None:
            hit = self._z1.substitute_power(n)
            if self.cutoff is not None:
                hit = hit.truncate(self.cutoff)
            self._z1_sub[n] = hit
        return hit

    def dz1_at_power(self, n: int) -> QSeries:
        """Z'(1, x) evaluated at x = q**n (not the derivative of Z(1, q**n))."""
        hit = self._dz1_sub.get(n)
        if hit is None:
            hit = self._z1.derivative().substitute_power(n)
            if self.cutoff is not None:
                hit = hit.truncate(self.cutoff - 1)
            self._dz1_sub[n] = hit
        return hit

    # -- partition functions --------------------------------------------

    def partition_function(self, N: int) -> QSeries:
        """Z(N, q) = (1/N) sum_n (+-1)^(n-1) Z(N-n, q) Z(1, q^n)."""
        if N < 0:
            raise ValueError("N must be >= 0")
        hit = self._Z.get(N)
        if hit is not None:
            return hit
        with self._lock:
            for m in range(1, N + 1):
                if m in self._Z:
                    continue
                total = QSeries.zero(self.cutoff)
                sign = 1
                for n in range(1, m + 1):
                    term = self._Z[m - n] * self.z1_at_power(n)
                    total = total + (term if sign > 0 else -term)
                    sign *= self.sign
                self._Z[m] = _divide_coefficients(total, m, f"Z({m}, q)")
        return self._Z[N]

    def partition_function_via_partitions(self, N: int) -> QSeries:
        """Z(N, q) as a sum over the cycle types of N.

        Each part size k used nu_k times contributes
        ((+-1)^(k-1))^nu_k Z(1, q^k)^nu_k / (nu_k! k^nu_k).
        """
        if N < 0:
            raise ValueError("N must be >= 0")
        total = QSeries.zero(self.cutoff)
        for parts in partitions(N):
            counts: dict[int, int] = {}
            for k in parts:
                counts[k] = counts.get(k, 0) + 1
            term = QSeries.one(self.cutoff)
            coeff = Fraction(1)
            for k, nu in counts.items():
                term = term * self.z1_at_power(k) ** nu
                coeff *= Fraction(self.sign ** ((k - 1) * nu), factorial(nu) * k**nu)
            total = total + term.scale(coeff)
        return total

    def partition_function_derivative(self, N: int) -> QSeries:
        """Z'(N, q) = sum_n (+-q)^(n-1) Z(N-n, q) Z'(1, q^n)."""
        if N < 0:
            raise ValueError("N must be >= 0")
        hit = self._dZ.get(N)
        if hit is not None:
            return hit
        cut = None if self.cutoff is None else self.cutoff - 1
        total = QSeries.zero(cut)
        for n in range(1, N + 1):
            term = (self.partition_function(N - n) * self.dz1_at_power(n)).shift(n - 1)
            if cut is not None:
                term = term.truncate(cut)
            total = total + (term if self.sign ** (n - 1) > 0 else -term)
        self._dZ[N] = total
        return total

    def partition_function_derivative_recursive(self, N: int) -> QSeries:
        """Z'(N, q) by recursion on Z'(N - n, q).

        Differentiating the Z(N, q) recursion gives
        (N-1) Z'(N) = sum_{n<N} (+-1)^(n-1) Z'(N-n) Z(1, q^n)
                      + sum_{n>=2} (n-1) (+-q)^(n-1) Z(N-n) Z'(1, q^n).
        """
        if N < 0:
            raise ValueError("N must be >= 0")
        cut = None if self.cutoff is None else self.cutoff - 1
        memo: dict[int, QSeries] = {0: QSeries.zero(cut), 1: self.dz1_at_power(1)}
        for m in range(2, N + 1):
            total = QSeries.zero(cut)
            for n in range(1, m):
                term = memo[m - n] * self.z1_at_power(n)
                total = total + (term if self.sign ** (n - 1) > 0 else -term)
            for n in range(2, m + 1):
                term = (self.partition_function(m - n) * self.dz1_at_power(n)).shift(n - 1)
                if cut is not None:
                    term = term.truncate(cut)
                total = total + term.scale((n - 1) * self.sign ** (n - 1))
            memo[m] = _divide_coefficients(total, m - 1, f"Z'({m}, q)")
        return memo[N]

    def partition_function_derivative_short(self, N: int) -> QSeries:
        """The shorter recursion (N-1) Z'(N) = sum_{n<N} (+-1)^(n-1) Z'(N-n) Z(1, q^n).

        Kept for comparison only: it drops the second sum of
        :meth:`partition_function_derivative_recursive` and is not an
        identity for N >= 2 (at N = 2 it misses (+-q) Z'(1, q^2)).
        """
        if N < 0:
            raise ValueError("N must be >= 0")
        cut = None if self.cutoff is None else self.cutoff - 1
        memo: dict[int, QSeries] = {0: QSeries.zero(cut), 1: self.dz1_at_power(1)}
        for m in range(2, N + 1):
            total = QSeries.zero(cut)
            for n in range(1, m):
                term = memo[m - n] * self.z1_at_power(n)
                total = total + (term if self.sign ** (n - 1) > 0 else -term)
            memo[m] = total.scale(Fraction(1, m - 1))
        return memo[N]

    # -- occupancies ----------------------------------------------------

    def occupancy_numerator(self, N: int, energy: int) -> QSeries:
        """g sum_n (+-1)^(n-1) q^(n e) Z(N-n, q), i.e. Z(N, q) N_e(N, q)."""
        g = self.spectrum.degeneracy(energy)
        if not g:
            raise ValueError(f"{energy} is not a level of the spectrum")
        total = QSeries.zero(self.cutoff)
        for n in range(1, N + 1):
            term = self.partition_function(N - n).shift(n * energy)
            if self.cutoff is not None:
                term = term.truncate(self.cutoff)
            total = total + (term if self.sign ** (n - 1) > 0 else -term)
        return total.scale(g)

    def occupancy(self, N: int, energy: int, q0=None):
        """Canonical occupancy of ``energy``.

        With ``q0=None`` the exact rational function of q is returned;
        otherwise the value at q0 as a float.
        """
        num = self.occupancy_numerator(N, energy)
        Z = self.partition_function(N)
        if q0 is None:
            return RationalFunction(num, Z)
        _check_q(q0, allow_zero=True)
        x = Fraction(q0)
        den = Z.value(x)
        if den == 0:
            raise ZeroDivisionError(f"Z({N}, q) vanishes at q = {q0}")
        return float(num.value(x) / den)

    def occupancy_step(self, N: int, energy: int) -> RationalFunction:
        """Occupancy through the one-step recursion in N (exact rational function):
        N_e(N) = q^e Z(N-1)/Z(N) (g +- N_e(N-1))."""
        g = self.spectrum.degeneracy(energy)
        if not g:
            raise ValueError(f"{energy} is not a level of the spectrum")
        if self.cutoff is not None:
            raise ValueError("the rational-function form needs an exact context")
        value = RationalFunction(QSeries.zero())
        for m in range(1, N + 1):
            Zm = self.partition_function(m)
            if Zm.is_zero():
                value = RationalFunction(QSeries.zero())
                continue
            ratio = RationalFunction(self.partition_function(m - 1).shift(energy), Zm)
            inner = RationalFunction(QSeries({0: g}))
            inner = inner + value if self.sign > 0 else inner - value
            value = ratio * inner
        return value

    def thermodynamics(self, N: int, q0: float) -> ThermoReport:
        _check_q(q0)
        Z = self.partition_function(N)
        rep = series_thermo(Z, q0)
        rep.N = N
        rep.occupancy = {e: self.occupancy(N, e, q0) for e in self.spectrum.energies}
        return rep

    # -- chargeless particles -------------------------------------------

    def chargeless_partition_function(self) -> QSeries:
        """prod 1/(1 - q^e)^g (bosons) or prod (1 + q^e)^g (fermions)."""
        if self.stats == BOSE:
            _reject_bose_zero(self.spectrum)
            if self.cutoff is None:
                raise ValueError("the bosonic product is an infinite series; set a cutoff")
        result = QSeries.one(self.cutoff)
        for lv in self.spectrum.levels:
            if self.stats == BOSE:
                factor = QSeries({0: 1, lv.energy: -1}, self.cutoff).reciprocal(self.cutoff)
            else:
                factor = QSeries({0: 1}, self.cutoff) + QSeries({lv.energy: 1}, self.cutoff)
            result = result * factor**lv.degeneracy
        return result

    def chargeless_thermo(self, q0: float, cap: int = DEFAULT_SERIES_CAP) -> ThermoReport:
        return chargeless_thermo(self, q0, cap)


def _check_q(q0, allow_zero: bool = False):
    lo_ok = q0 >= 0 if allow_zero else q0 > 0
    if not (lo_ok and q0 < 1):
        interval = "[0, 1)" if allow_zero else "(0, 1)"
        raise ValueError(f"q must lie in {interval}, got {q0!r}")


def _reject_bose_zero(spectrum: Spectrum):
    if spectrum.min_energy == 0:
        raise ValueError(
            "chargeless bosons need a non-zero ground-state energy; "
            "the spectrum contains level 0"
        )


def series_thermo(Z: QSeries, q0: float) -> ThermoReport:
    """U, Var(U), heat capacity and entropy from a partition series Z(q).

    Moments come from q d/dq applied to the exact coefficients and are
    evaluated in rational arithmetic at q0, so Var(U) >= 0 holds exactly.
    """
    _check_q(q0)
    x = Fraction(q0)
    D1 = Z.q_derivative()
    D2 = D1.q_derivative()
    z0 = Z.value(x)
    if z0 <= 0:
        raise ZeroDivisionError("partition function is not positive at q")
    U = D1.value(x) / z0
    var = D2.value(x) / z0 - U * U
    lnq = math.log(q0)
    lnZ = log_fraction(z0)
    T = temperature(q0)
    return ThermoReport(
        N=0,
        q=q0,
        T=T,
        Z=float(z0),
        U=float(U),
        VarU=float(var),
        c=float(var) * lnq * lnq,
        S=lnZ - float(U) * lnq,
    )


def z1(ctx: CanonicalContext) -> QSeries:
    return ctx.z1()


def partition_function(ctx: CanonicalContext, N: int) -> QSeries:
    return ctx.partition_function(N)


def partition_function_via_partitions(ctx: CanonicalContext, N: int) -> QSeries:
    return ctx.partition_function_via_partitions(N)


def partition_function_derivative(ctx: CanonicalContext, N: int) -> QSeries:
    return ctx.partition_function_derivative(N)


def occupancy_canonical(ctx: CanonicalContext, N: int, energy: int, q0=None):
    return ctx.occupancy(N, energy, q0)


def thermodynamics(ctx: CanonicalContext, N: int, q0: float) -> ThermoReport:
    return ctx.thermodynamics(N, q0)


def chargeless_partition_function(ctx: CanonicalContext) -> QSeries:
    return ctx.chargeless_partition_function()


def chargeless_occupancy(spectrum: Spectrum, stats: str, energy: int, q0: float) -> float:
    """g / (q^-e -+ 1), written as g x / (1 -+ x) with x = q^e."""
    g = spectrum.degeneracy(energy)
    if not g:
        raise ValueError(f"{energy} is not a level of the spectrum")
    x = q0**energy
    return g * x / (1 - x) if stats == BOSE else g * x / (1 + x)


def chargeless_thermo(ctx: CanonicalContext, q0: float, cap: int = DEFAULT_SERIES_CAP) -> ThermoReport:
    """Mean particle number, energy, entropy of photon/phonon-like particles.

    N and U are summed from the one-particle partition function at q^n;
    occupancies use the closed forms; the two routes are cross-checked.
    A fermionic level at zero energy is handled in closed form (each such
    state is filled with probability 1/2), since its alternating series
    does not converge.
    """
    _check_q(q0)
    s, stats = ctx.spectrum, ctx.stats
    if stats == BOSE:
        _reject_bose_zero(s)
    sign = ctx.sign
    positive = [(lv.energy, lv.degeneracy) for lv in s.levels if lv.energy > 0]
    g0 = s.degeneracy(0)

    def z1_at(x):
        return math.fsum(g * x**e for e, g in positive)

    def dz1_at(x):
        return math.fsum(e * g * x ** (e - 1) for e, g in positive)

    N = sum_series(lambda n: sign ** (n - 1) * z1_at(q0**n), cap, "chargeless N(q)") if positive else 0.0
    U = sum_series(lambda n: sign ** (n - 1) * dz1_at(q0**n) * q0**n, cap, "chargeless U(q)") if positive else 0.0
    N += g0 / 2

    occ = {e: chargeless_occupancy(s, stats, e, q0) for e in s.energies}
    direct_U = math.fsum(e * n for e, n in occ.items())
    direct_N = math.fsum(occ.values())
    if not (abs(direct_U - U) <= 1e-10 * max(1.0, abs(U)) and abs(direct_N - N) <= 1e-10 * max(1.0, abs(N))):
        raise ConsistencyError(f"chargeless series and closed forms disagree: U {U} vs {direct_U}, N {N} vs {direct_N}")

    if stats == BOSE:
        lnZ = -math.fsum(g * math.log1p(-(q0**e)) for e, g in positive)
        var = math.fsum(e * e * g * q0**e / (1 - q0**e) ** 2 for e, g in positive)
    else:
        lnZ = math.fsum(g * math.log1p(q0**e) for e, g in positive) + g0 * math.log(2)
        var = math.fsum(e * e * g * q0**e / (1 + q0**e) ** 2 for e, g in positive)
    lnq = math.log(q0)
    return ThermoReport(
        N=N,
        q=q0,
        T=temperature(q0),
        Z=math.exp(lnZ),
        U=U,
        VarU=var,
        c=var * lnq * lnq,
        S=lnZ - U * lnq,
        occupancy=occ,
    )
