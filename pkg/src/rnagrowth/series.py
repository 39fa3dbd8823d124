"""Truncated formal power series with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import OrderMismatchError

__all__ = [
    "PowerSeries",
    "series_linear_combine",
    "series_mul",
    "series_inverse",
    "to_rational",
    "format_rational",
]


def to_rational(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction.

    Floats are rejected so that no binary rounding sneaks into exact data.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients of z^0..z^order; everything beyond ``order`` is unknown."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable):
        values = tuple(to_rational(c) for c in coeffs)
        if not values:
            raise ValueError("a power series needs at least one coefficient")
        object.__setattr__(self, "coeffs", values)

    @classmethod
    def zeros(cls, order: int) -> PowerSeries:
        return cls([0] * (order + 1))

    @classmethod
    def constant(cls, c, order: int) -> PowerSeries:
        return cls([c] + [0] * order)

    @classmethod
    def monomial(cls, k: int, order: int, c=1) -> PowerSeries:
        out = [0] * (order + 1)
        if k <= order:
            out[k] = c
        return cls(out)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> PowerSeries:
        """Lower the order, or raise it by padding with zeros.

        Padding is only meaningful for series known to be polynomials.
        """
        if order <= self.order:
            return PowerSeries(self.coeffs[: order + 1])
        return PowerSeries(self.coeffs + (Fraction(0),) * (order - self.order))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __add__(self, other: PowerSeries) -> PowerSeries:
        return series_linear_combine(1, self, 1, other)

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        return series_linear_combine(1, self, -1, other)

    def __neg__(self) -> PowerSeries:
        return PowerSeries(-c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        k = to_rational(other)
        return PowerSeries(k * c for c in self.coeffs)

    __rmul__ = __mul__

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> PowerSeries:
        return cls(to_rational(s) for s in data)


def _check_orders(a: PowerSeries, b: PowerSeries) -> None:
    if a.order != b.order:
        raise OrderMismatchError(f"series orders differ: {a.order} != {b.order}")


def series_linear_combine(alpha, a: PowerSeries, beta, b: PowerSeries) -> PowerSeries:
    _check_orders(a, b)
    alpha, beta = to_rational(alpha), to_rational(beta)
    return PowerSeries(alpha * x + beta * y for x, y in zip(a.coeffs, b.coeffs))


def _scaled_integers(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(c.denominator for c in coeffs))
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the shared order."""
    _check_orders(a, b)
    # convolve over integers after clearing denominators; Fraction per term is slow
    xs, dx = _scaled_integers(a.coeffs)
    ys, dy = _scaled_integers(b.coeffs)
    n = a.order
    out = []
    for k in range(n + 1):
        acc = 0
        for j in range(k + 1):
            x = xs[j]
            if x:
                acc += x * ys[k - j]
        out.append(Fraction(acc, dx * dy))
    return PowerSeries(out)


def series_inverse(a: PowerSeries) -> PowerSeries:
    """Multiplicative inverse; requires a nonzero constant term."""
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term has no inverse")
    xs, da = _scaled_integers(a.coeffs)
    # b = da * (integer series xs)^{-1}; solve xs * c = 1 with c rational
    inv0 = Fraction(1, xs[0])
    c: list[Fraction] = [inv0]
    for k in range(1, a.order + 1):
        acc = sum((xs[j] * c[k - j] for j in range(1, k + 1) if xs[j]), Fraction(0))
        c.append(-acc * inv0)
    return PowerSeries(da * v for v in c)
