import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rnagrowth.errors import OrderMismatchError
from rnagrowth.series import (
    PowerSeries,
    series_inverse,
    series_linear_combine,
    series_mul,
)

from conftest import brute_square, rationals, series_of


@pytest.mark.parametrize(
    "alpha, a, beta, b, expected",
    [
        (1, (1, 1, 1), 0, (7, -3, 5), (1, 1, 1)),
        (1, (1, 2, 3), -1, (1, 2, 3), (0, 0, 0)),
        (2, (1, 0, 1), 3, (0, 1, 0), (2, 3, 2)),
    ],
)
def test_linear_combine(alpha, a, beta, b, expected):
    out = series_linear_combine(alpha, PowerSeries(a), beta, PowerSeries(b))
    assert out == PowerSeries(expected)
    assert out.order == 2


def test_mul_examples():
    assert series_mul(PowerSeries([1, 0, 0, 0]), PowerSeries([5, 7, 9, 11])) == PowerSeries([5, 7, 9, 11])
    assert series_mul(PowerSeries([1] * 4), PowerSeries([1] * 4)) == PowerSeries([1, 2, 3, 4])


def test_square_of_lambda2_counts():
    a = [1, 1, 1, 2, 4]
    expected = brute_square(a)[4]
    assert expected == 13
    sq = series_mul(PowerSeries(a), PowerSeries(a))
    assert sq[4] == 13


def test_order_mismatch():
    with pytest.raises(OrderMismatchError):
        series_mul(PowerSeries([1, 2]), PowerSeries([1, 2, 3]))
    with pytest.raises(OrderMismatchError):
        series_linear_combine(1, PowerSeries([1]), 1, PowerSeries([1, 2]))


def test_floats_rejected():
    with pytest.raises(TypeError):
        PowerSeries([0.5, 1])


def test_json_round_trip():
    s = PowerSeries([Fraction(-3, 7), 0, 12345678901234567890123, Fraction(1, 3)])
    text = json.dumps(s.to_json())
    assert json.loads(text) == ["-3/7", "0", "12345678901234567890123", "1/3"]
    assert PowerSeries.from_json(json.loads(text)) == s


def test_inverse():
    s = PowerSeries([1, -1, 0, 0, 0])  # 1 - z
    assert series_inverse(s) == PowerSeries([1, 1, 1, 1, 1])
    with pytest.raises(ZeroDivisionError):
        series_inverse(PowerSeries([0, 1]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12).flatmap(lambda n: st.tuples(series_of(n), series_of(n), series_of(n))))
def test_ring_axioms(abc):
    a, b, c = abc
    assert series_mul(a, b) == series_mul(b, a)
    assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))
    assert series_mul(a, b + c) == series_mul(a, b) + series_mul(a, c)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10).flatmap(lambda n: st.tuples(series_of(n), series_of(n))), rationals, rationals)
def test_product_matches_brute_force_and_linearity(ab, alpha, beta):
    a, b = ab
    prod = series_mul(a, b)
    for k in range(a.order + 1):
        assert prod[k] == sum(a[j] * b[k - j] for j in range(k + 1))
    comb = series_linear_combine(alpha, a, beta, b)
    assert all(comb[k] == alpha * a[k] + beta * b[k] for k in range(a.order + 1))


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=15).flatmap(
    lambda xs: st.tuples(st.just(xs), st.lists(st.integers(0, 10**6), min_size=len(xs), max_size=len(xs)))
))
def test_nonnegative_product(xy):
    x, y = xy
    assert all(c >= 0 for c in series_mul(PowerSeries(x), PowerSeries(y)))
