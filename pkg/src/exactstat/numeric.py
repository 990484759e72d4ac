"""Floating-point helpers shared by the canonical and grand-canonical code."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

from .errors import ConvergenceError

SERIES_RTOL = 1e-15
DEFAULT_SERIES_CAP = 10_000


def sum_series(term: Callable[[int], float], cap: int = DEFAULT_SERIES_CAP, what: str = "series") -> float:
    """Sum ``term(1) + term(2) + ...`` until a term drops below 1e-15 of the
    running total.  Raises ConvergenceError once ``cap`` terms are spent."""
    acc = 0.0
    comp = 0.0  # Kahan compensation
    for n in range(1, cap + 1):
        t = term(n)
        y = t - comp
        s = acc + y
        comp = (s - acc) - y
        acc = s
        if abs(t) <= SERIES_RTOL * abs(acc) or t == 0.0:
            return acc
    raise ConvergenceError(f"{what} did not converge within {cap} terms")


def log_fraction(x) -> float:
    """Natural log of a positive rational without overflowing to float."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of a non-positive number")
    return math.log(x.numerator) - math.log(x.denominator)


def temperature(q0: float) -> float:
    """T = -1/ln q with k_B = 1 and energies in grid units."""
    return -1.0 / math.log(q0)


def q_of_T(T: float) -> float:
    return math.exp(-1.0 / T)


def close(a: float, b: float, tol: float) -> bool:
    """|a - b| <= tol * max(1, |a|, |b|)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
