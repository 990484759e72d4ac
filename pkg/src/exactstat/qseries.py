"""Exact polynomials and truncated power series in one variable q.

A :class:`QSeries` holds a sparse map exponent -> exact coefficient (int or
Fraction) plus a truncation cutoff.  ``cutoff=None`` means the value is an
exact polynomial; otherwise every coefficient at exponent >= cutoff is
unknown and was dropped.  Mixing values keeps the smaller cutoff.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .errors import ConsistencyError


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _min_cutoff(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class QSeries:
    __slots__ = ("_c", "cutoff")

    def __init__(self, coeffs: Mapping[int, object] | Iterable = (), cutoff: int | None = None):
        if cutoff is not None and cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        c = {}
        for e, v in items:
            if e < 0:
                raise ValueError("negative exponent")
            if cutoff is not None and e >= cutoff:
                continue
            if not isinstance(v, Rational):
                raise TypeError(f"coefficients must be exact rationals, got {v!r}")
            v = _norm(Fraction(v)) if isinstance(v, Fraction) else int(v)
            if v:
                c[e] = c.get(e, 0) + v
        self._c = {e: v for e, v in c.items() if v}
        self.cutoff = cutoff

    @classmethod
    def _raw(cls, c: dict, cutoff):
        obj = cls.__new__(cls)
        obj._c = c
        obj.cutoff = cutoff
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff=1, cutoff: int | None = None) -> "QSeries":
        return cls({exponent: coeff}, cutoff)

    @classmethod
    def one(cls, cutoff: int | None = None) -> "QSeries":
        return cls({0: 1}, cutoff)

    @classmethod
    def zero(cls, cutoff: int | None = None) -> "QSeries":
        return cls._raw({}, cutoff)

    # -- inspection -----------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.cutoff is None

    def __getitem__(self, e: int):
        if self.cutoff is not None and e >= self.cutoff:
            raise IndexError(f"coefficient {e} lies beyond the truncation cutoff {self.cutoff}")
        return self._c.get(e, 0)

    def items(self):
        return sorted(self._c.items())

    def degree(self) -> int:
        """Highest stored exponent; -1 for the zero series."""
        return max(self._c, default=-1)

    def valuation(self) -> int | None:
        return min(self._c, default=None)

    def coefficients(self, length: int | None = None) -> list:
        if length is None:
            length = self.degree() + 1 if self.cutoff is None else self.cutoff
        return [self._c.get(e, 0) for e in range(length)]

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, QSeries):
            return self.cutoff == other.cutoff and self._c == other._c
        if isinstance(other, Rational):
            return self.cutoff is None and self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((frozenset(self._c.items()), self.cutoff))

    def __repr__(self):
        tail = "" if self.cutoff is None else f", cutoff={self.cutoff}"
        return f"QSeries({dict(self.items())!r}{tail})"

    def __str__(self):
        return self.to_text()

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, Rational):
            return QSeries({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cutoff = _min_cutoff(self.cutoff, other.cutoff)
        c = {}
        for src in (self._c, other._c):
            for e, v in src.items():
                if cutoff is None or e < cutoff:
                    c[e] = c.get(e, 0) + v
        return QSeries._raw({e: _norm(v) for e, v in c.items() if v}, cutoff)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw({e: -v for e, v in self._c.items()}, self.cutoff)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "QSeries":
        if not k:
            return QSeries._raw({}, self.cutoff)
        return QSeries._raw({e: _norm(v * k) for e, v in self._c.items()}, self.cutoff)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        cutoff = _min_cutoff(self.cutoff, other.cutoff)
        c: dict[int, object] = {}
        b_items = sorted(other._c.items())
        for ea, va in self._c.items():
            for eb, vb in b_items:
                e = ea + eb
                if cutoff is not None and e >= cutoff:
                    break
                c[e] = c.get(e, 0) + va * vb
        return QSeries._raw({e: _norm(v) for e, v in c.items() if v}, cutoff)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need reciprocal()")
        result = QSeries.one(self.cutoff)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "QSeries":
        """Multiply by q**k (k >= 0); the cutoff moves up by k."""
        if k < 0:
            raise ValueError("shift must be non-negative")
        cutoff = None if self.cutoff is None else self.cutoff + k
        return QSeries._raw({e + k: v for e, v in self._c.items()}, cutoff)

    def truncate(self, cutoff: int) -> "QSeries":
        cutoff = _min_cutoff(self.cutoff, cutoff)
        return QSeries._raw({e: v for e, v in self._c.items() if e < cutoff}, cutoff)

    def substitute_power(self, n: int) -> "QSeries":
        """Replace q by q**n."""
        if n < 1:
            raise ValueError("substitution power must be >= 1")
        cutoff = None if self.cutoff is None else n * self.cutoff
        return QSeries._raw({n * e: v for e, v in self._c.items()}, cutoff)

    def derivative(self) -> "QSeries":
        cutoff = None if self.cutoff is None else max(self.cutoff - 1, 0)
        return QSeries._raw({e - 1: _norm(e * v) for e, v in self._c.items() if e}, cutoff)

    def q_derivative(self) -> "QSeries":
        """Apply q d/dq, i.e. multiply each coefficient by its exponent."""
        return QSeries._raw({e: _norm(e * v) for e, v in self._c.items() if e}, self.cutoff)

    def reciprocal(self, cutoff: int | None = None) -> "QSeries":
        """1/self as a series truncated at ``cutoff`` (needs a non-zero constant term)."""
        cutoff = _min_cutoff(self.cutoff, cutoff)
        if cutoff is None:
            raise ValueError("reciprocal of a series needs a truncation cutoff")
        a0 = self._c.get(0, 0)
        if not a0:
            raise ZeroDivisionError("constant term is zero")
        inv0 = Fraction(1) / a0
        a = sorted((e, v) for e, v in self._c.items() if e)
        b = [0] * cutoff
        if cutoff:
            b[0] = _norm(inv0)
        for n in range(1, cutoff):
            acc = 0
            for e, v in a:
                if e > n:
                    break
                acc += v * b[n - e]
            b[n] = _norm(-acc * inv0) if acc else 0
        return QSeries._raw({e: v for e, v in enumerate(b) if v}, cutoff)

    def divmod(self, divisor: "QSeries") -> tuple["QSeries", "QSeries"]:
        """Polynomial long division of exact polynomials."""
        if not (self.is_exact and divisor.is_exact):
            raise ValueError("polynomial division needs exact polynomials")
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self._c)
        dd = divisor.degree()
        lead = Fraction(divisor._c[dd])
        d_items = list(divisor._c.items())
        quot: dict[int, object] = {}
        while rem:
            top = max(rem)
            if top < dd:
                break
            factor = _norm(Fraction(rem[top]) / lead)
            shift = top - dd
            quot[shift] = factor
            for e, v in d_items:
                k = e + shift
                nv = rem.get(k, 0) - factor * v
                if nv:
                    rem[k] = _norm(nv)
                else:
                    rem.pop(k, None)
        return QSeries._raw(quot, None), QSeries._raw(rem, None)

    def exact_div(self, divisor: "QSeries") -> "QSeries":
        quot, rem = self.divmod(divisor)
        if not rem.is_zero():
            raise ConsistencyError(f"polynomial division left remainder {rem}")
        return quot

    def monic(self) -> "QSeries":
        if self.is_zero():
            return self
        lead = self._c[self.degree()]
        return self.scale(Fraction(1) / lead)

    # -- evaluation -----------------------------------------------------

    def value(self, x):
        """Evaluate at ``x`` with no domain check (exact if ``x`` is rational)."""
        if not self._c:
            return 0 if isinstance(x, Rational) else 0.0
        items = sorted(self._c.items(), reverse=True)
        exact = isinstance(x, Rational)
        acc = 0 if exact else 0.0
        prev = items[0][0]
        for e, v in items:
            if prev != e:
                acc *= x ** (prev - e)
            acc += v if exact else float(v)
            prev = e
        if prev:
            acc *= x**prev
        return acc

    def evaluate(self, q0):
        """Value at ``0 <= q0 < 1``; exact for rational q0, float otherwise."""
        if not (0 <= q0 < 1):
            raise ValueError(f"q must lie in [0, 1), got {q0!r}")
        return self.value(q0)

    # -- serialization --------------------------------------------------

    def to_text(self) -> str:
        if not self._c:
            body = "0"
        else:
            parts = []
            for e, v in self.items():
                neg = v < 0
                mag = -v if neg else v
                if e == 0:
                    term = str(mag)
                else:
                    coeff = "" if mag == 1 else f"{mag} "
                    term = f"{coeff}q" if e == 1 else f"{coeff}q^{e}"
                if not parts:
                    parts.append(("-" if neg else "") + term)
                else:
                    parts.append(("- " if neg else "+ ") + term)
            body = " ".join(parts)
        if self.cutoff is not None:
            body += f" + O(q^{self.cutoff})"
        return body

    def to_json(self) -> list:
        return [[e, str(v)] for e, v in self.items()]

    @classmethod
    def from_json(cls, data: list, cutoff: int | None = None) -> "QSeries":
        return cls({int(e): Fraction(v) for e, v in data}, cutoff)


q = QSeries.monomial(1)


def pochhammer(n: int, cutoff: int | None = None) -> QSeries:
    """(q)_n = (1 - q)(1 - q^2)...(1 - q^n), with (q)_0 = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    result = QSeries.one(cutoff)
    for k in range(1, n + 1):
        result = result * QSeries({0: 1, k: -1}, cutoff)
    return result


def add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def substitute_power(a: QSeries, n: int) -> QSeries:
    return a.substitute_power(n)


def derivative(a: QSeries) -> QSeries:
    return a.derivative()


def evaluate(a: QSeries, q0):
    return a.evaluate(q0)


def poly_gcd(a: QSeries, b: QSeries) -> QSeries:
    """Monic greatest common divisor of two exact polynomials over Q."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic() if not a.is_zero() else a


class RationalFunction:
    """Quotient of two exact polynomials, kept in lowest terms with a monic
    denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: QSeries, den: QSeries | None = None, reduce: bool = True):
        if den is None:
            den = QSeries.one()
        if not (num.is_exact and den.is_exact):
            raise ValueError("rational functions need exact polynomials")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            if num.is_zero():
                den = QSeries.one()
            else:
                g = poly_gcd(num, den)
                if g.degree() > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lead = den[den.degree()]
            if lead != 1:
                inv = Fraction(1) / lead
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num * other.den == other.num * self.den
        if isinstance(other, QSeries):
            return self.num == other * self.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __add__(self, other):
        if isinstance(other, QSeries):
            other = RationalFunction(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            other = RationalFunction(other)
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return RationalFunction(self.num * other, self.den)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return RationalFunction(self.num, self.den * other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def value(self, x):
        return self.num.value(x) / self.den.value(x)
