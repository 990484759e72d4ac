from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactstat.qseries import (
    QSeries,
    RationalFunction,
    add,
    derivative,
    evaluate,
    mul,
    pochhammer,
    poly_gcd,
    substitute_power,
)

polys = st.dictionaries(st.integers(0, 8), st.integers(-5, 5), max_size=6).map(QSeries)


def test_add_examples():
    assert add(QSeries([1, 1]), QSeries([1, -1])) == QSeries([2])
    x = QSeries([3, 0, 1])
    assert add(x, QSeries.zero()) == x
    mixed = add(QSeries([1, 1], cutoff=5), QSeries({7: 1}))
    assert mixed.cutoff == 5 and mixed == QSeries([1, 1], cutoff=5)


def test_mul_examples():
    assert mul(QSeries([1, -1]), QSeries([1, 1, 1])) == QSeries({0: 1, 3: -1})
    assert pochhammer(2) == QSeries([1, -1, -1, 1])
    x = QSeries([2, 0, 5])
    assert mul(x, QSeries.one()) == x


def test_substitute_power():
    assert substitute_power(QSeries([1, 1]), 2) == QSeries({0: 1, 2: 1})
    x = QSeries([1, 2, 3])
    assert substitute_power(x, 1) == x
    y = substitute_power(QSeries([1, 1, 1], cutoff=7), 3)
    assert y.truncate(7) == QSeries({0: 1, 3: 1, 6: 1}, cutoff=7)


def test_derivative():
    assert derivative(QSeries({3: 1})) == QSeries({2: 3})
    assert derivative(QSeries([4])) == QSeries.zero()
    assert derivative(QSeries([1, 2, 1])) == QSeries([2, 2])


def test_evaluate():
    assert evaluate(QSeries([1, 1, 1]), 0) == 1
    assert evaluate(QSeries([1, -1]), 0.5) == 0.5
    assert evaluate(pochhammer(2), 0.5) == pytest.approx(0.375)
    with pytest.raises(ValueError):
        evaluate(QSeries([1]), 1.0)
    with pytest.raises(ValueError):
        evaluate(QSeries([1]), -0.1)


def test_pochhammer():
    assert pochhammer(0) == QSeries.one()
    assert pochhammer(1) == QSeries([1, -1])
    assert pochhammer(2) == QSeries([1, -1, -1, 1])


def test_no_stored_zeros_and_cutoff():
    x = QSeries({0: 1, 2: 0, 9: 4}, cutoff=5)
    assert dict(x.items()) == {0: 1}
    with pytest.raises(IndexError):
        x[5]


def test_reciprocal():
    r = QSeries([1, -1]).reciprocal(6)
    assert r == QSeries([1] * 6, cutoff=6)
    with pytest.raises(ZeroDivisionError):
        QSeries({1: 1}).reciprocal(4)


def test_exact_division():
    a = pochhammer(4)
    b = pochhammer(2)
    q = a.exact_div(b)
    assert q * b == a
    with pytest.raises(ArithmeticError):
        QSeries([1, 0, 1]).exact_div(QSeries([1, 1]))


def test_text_and_json():
    x = QSeries({0: 1, 3: -1})
    assert x.to_text() == "1 - q^3"
    assert QSeries.from_json(x.to_json()) == x
    y = QSeries({1: Fraction(1, 2)}, cutoff=4)
    assert QSeries.from_json(y.to_json(), cutoff=4) == y
    assert "O(q^4)" in y.to_text()


def test_rational_function():
    a = RationalFunction(QSeries([1, -1]), QSeries([1, 0, -1]))
    assert a == RationalFunction(QSeries.one(), QSeries([1, 1]))
    assert a.value(Fraction(1, 2)) == Fraction(2, 3)
    assert poly_gcd(QSeries([1, 0, -1]), QSeries([1, -1])).degree() == 1


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_leibniz(a, b):
    assert derivative(a * b) == derivative(a) * b + a * derivative(b)


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.floats(0.0, 0.9))
def test_evaluation_is_a_homomorphism(a, b, x):
    lhs = evaluate(a * b, x)
    rhs = evaluate(a, x) * evaluate(b, x)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(polys, st.integers(1, 4), st.integers(1, 4))
def test_substitution_composes(a, m, n):
    assert substitute_power(a, m * n) == substitute_power(substitute_power(a, n), m)


def test_homomorphism_high_degree():
    a = QSeries({e: (-1) ** e * (e % 7 + 1) for e in range(65)})
    b = QSeries({e: (e % 5) - 2 for e in range(65)})
    for x in (0.1, 0.5, 0.9):
        assert evaluate(a * b, x) == pytest.approx(evaluate(a, x) * evaluate(b, x), rel=1e-12)
