"""Grand-canonical ensemble at fugacity z and q = exp(-1/T).

The fugacity is the input; the chemical potential mu = T ln z is derived.
Occupancies always use the closed Bose-Einstein / Fermi-Dirac forms; the
power series in z are used as a second route and cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .canonical import CanonicalContext, ThermoReport
from .errors import ConsistencyError
from .numeric import DEFAULT_SERIES_CAP, close, sum_series, temperature
from .oracle import BOSE, check_stats
from .spectrum import Spectrum

CROSS_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class GrandContext:
    spectrum: Spectrum
    stats: str
    z: float
    q0: float
    series_cap: int = DEFAULT_SERIES_CAP

    def __post_init__(self):
        check_stats(self.stats)
        if not self.z > 0:
            raise ValueError(f"fugacity must be positive, got {self.z!r}")
        if not 0 < self.q0 < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q0!r}")
        if self.stats == BOSE and self.z * self.q0**self.spectrum.min_energy >= 1:
            raise ValueError(
                f"bosonic grand partition function diverges: z q^e_min = "
                f"{self.z * self.q0 ** self.spectrum.min_energy} >= 1"
            )

    @property
    def sign(self) -> int:
        return 1 if self.stats == BOSE else -1

    @property
    def series_converges(self) -> bool:
        """The z-power series need z q^e_min < 1; the products do not (fermions)."""
        return self.z * self.q0**self.spectrum.min_energy < 1

    @property
    def T(self) -> float:
        return temperature(self.q0)

    @property
    def mu(self) -> float:
        return self.T * math.log(self.z)

    def _levels(self):
        return [(lv.energy, lv.degeneracy) for lv in self.spectrum.levels]

    def z1_at(self, x: float) -> float:
        return math.fsum(g * x**e for e, g in self._levels())

    def dz1_at(self, x: float) -> float:
        return math.fsum(e * g * x ** (e - 1) for e, g in self._levels() if e)


def grand_log_product(spectrum: Spectrum, stats: str, z: float, q0: float) -> float:
    """ln of prod (1 - z q^e)^-g or prod (1 + z q^e)^g for any real z.

    No domain check beyond each factor staying positive, so signed
    fugacities (used by the boson/fermion duality identities) are allowed.
    """
    terms = []
    for lv in spectrum.levels:
        x = z * q0**lv.energy
        if stats == BOSE:
            if x >= 1:
                raise ValueError(f"factor 1 - z q^{lv.energy} is not positive")
            terms.append(-lv.degeneracy * math.log1p(-x))
        else:
            if x <= -1:
                raise ValueError(f"factor 1 + z q^{lv.energy} is not positive")
            terms.append(lv.degeneracy * math.log1p(x))
    return math.fsum(terms)


def _require_series(ctx: GrandContext):
    if not ctx.series_converges:
        raise ValueError(f"z q^e_min = {ctx.z * ctx.q0 ** ctx.spectrum.min_energy} >= 1: the z-series diverges")


def ln_grand_partition_series(ctx: GrandContext) -> float:
    """sum_n (+-1)^(n-1) Z(1, q^n) z^n / n."""
    _require_series(ctx)
    s = ctx.sign
    return sum_series(
        lambda n: s ** (n - 1) * ctx.z1_at(ctx.q0**n) * ctx.z**n / n,
        ctx.series_cap,
        "ln grand partition series",
    )


def ln_grand_partition(ctx: GrandContext, cross_check: bool = True) -> float:
    product = grand_log_product(ctx.spectrum, ctx.stats, ctx.z, ctx.q0)
    if cross_check and ctx.series_converges:
        series = ln_grand_partition_series(ctx)
        if not close(product, series, CROSS_CHECK_TOL):
            raise ConsistencyError(f"ln grand partition: product {product!r} vs series {series!r}")
    return product


def occupancy_grand(ctx: GrandContext, energy: int) -> float:
    g = ctx.spectrum.degeneracy(energy)
    if not g:
        raise ValueError(f"{energy} is not a level of the spectrum")
    x = ctx.z * ctx.q0**energy
    if ctx.stats == BOSE:
        if x >= 1:
            raise ValueError(f"bosonic occupancy diverges at level {energy}: z q^e = {x}")
        return g * x / (1 - x)
    return g * x / (1 + x)


def occupancies_grand(ctx: GrandContext) -> dict[int, float]:
    return {e: occupancy_grand(ctx, e) for e in ctx.spectrum.energies}


def mean_N_and_U_series(ctx: GrandContext) -> tuple[float, float]:
    _require_series(ctx)
    s, q0, z = ctx.sign, ctx.q0, ctx.z
    N = sum_series(lambda n: s ** (n - 1) * ctx.z1_at(q0**n) * z**n, ctx.series_cap, "grand N series")
    if ctx.spectrum.max_energy == 0:
        return N, 0.0
    U = sum_series(
        lambda n: s ** (n - 1) * ctx.dz1_at(q0**n) * (z * q0) ** n, ctx.series_cap, "grand U series"
    )
    return N, U


def mean_N_and_U(ctx: GrandContext, cross_check: bool = True) -> tuple[float, float]:
    """(N, U) from the z-series, checked against sums of the closed-form occupancies.

    Where the series diverge (fermions with z q^e_min >= 1) the occupancy
    sums are returned directly.
    """
    occ = occupancies_grand(ctx)
    dN = math.fsum(occ.values())
    dU = math.fsum(e * n for e, n in occ.items())
    if not ctx.series_converges:
        return dN, dU
    N, U = mean_N_and_U_series(ctx)
    if cross_check:
        if not (close(N, dN, CROSS_CHECK_TOL) and close(U, dU, CROSS_CHECK_TOL)):
            raise ConsistencyError(f"grand series (N={N}, U={U}) vs occupancy sums (N={dN}, U={dU})")
    return N, U


def energy_variance(ctx: GrandContext) -> float:
    """q dU/dq at fixed z: sum e^2 g x / (1 -+ x)^2 with x = z q^e."""
    terms = []
    for e, g in ctx._levels():
        x = ctx.z * ctx.q0**e
        terms.append(e * e * g * x / ((1 - x) ** 2 if ctx.stats == BOSE else (1 + x) ** 2))
    return math.fsum(terms)


def entropy_grand(ctx: GrandContext) -> float:
    """S = ln Z + U/T - (mu/T) N with k_B = 1."""
    lnZ = grand_log_product(ctx.spectrum, ctx.stats, ctx.z, ctx.q0)
    occ = occupancies_grand(ctx)
    N = math.fsum(occ.values())
    U = math.fsum(e * n for e, n in occ.items())
    return lnZ - U * math.log(ctx.q0) - N * math.log(ctx.z)


def grand_report(ctx: GrandContext, cross_check: bool = True) -> ThermoReport:
    lnZ = ln_grand_partition(ctx, cross_check)
    N, U = mean_N_and_U(ctx, cross_check)
    var = energy_variance(ctx)
    lnq = math.log(ctx.q0)
    return ThermoReport(
        N=N,
        q=ctx.q0,
        T=ctx.T,
        Z=math.exp(lnZ),
        U=U,
        VarU=var,
        c=var * lnq * lnq,
        S=lnZ - U * lnq - N * math.log(ctx.z),
        occupancy=occupancies_grand(ctx),
        z=ctx.z,
        mu=ctx.mu,
    )


def canonical_mixture_occupancy(
    ctx: GrandContext, energy: int, n_max: int, canonical: CanonicalContext | None = None
) -> float:
    """Average of the canonical occupancy over n = 0..n_max with weight Z(n, q) z^n.

    Converges to :func:`occupancy_grand` as ``n_max`` grows.
    """
    if canonical is None:
        canonical = CanonicalContext(ctx.spectrum, ctx.stats)
    num = 0.0
    den = 0.0
    for n in range(n_max + 1):
        w = canonical.partition_function(n).value(ctx.q0) * ctx.z**n
        den += w
        if n and w:
            num += w * canonical.occupancy(n, energy, ctx.q0)
    return num / den
