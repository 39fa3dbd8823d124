"""Exact polynomials over Q in the variables z, S, T.

Multivariate polynomials are sparse maps from exponent vectors
``(e_z, e_S, e_T)`` to nonzero Fractions.  Univariate polynomials in ``z``
get their own dense class because root finding, gcds and square-free
reduction only ever happen there.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import PolynomialError
from .series import format_rational, to_rational

__all__ = [
    "VARS",
    "MultiPoly",
    "UniPoly",
    "z",
    "S",
    "T",
    "poly_arith",
    "poly_eval",
    "resultant",
    "discriminant",
    "squarefree_part",
    "exact_divides",
    "determinant",
    "strip_factor",
]

VARS = ("z", "S", "T")
_INDEX = {name: i for i, name in enumerate(VARS)}
Exponents = tuple[int, int, int]


def _var_index(var: str) -> int:
    try:
        return _INDEX[var]
    except KeyError:
        raise PolynomialError(f"unknown variable {var!r}; expected one of {VARS}") from None


def _order_key(e: Exponents):
    # lex with priority T > S > z: the leading term is the top power of the
    # eliminated / solved-for variable, ties broken by the power of z
    return (e[2], e[1], e[0])


class MultiPoly:
    """Immutable sparse polynomial in z, S, T with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponents, object] | None = None):
        clean: dict[Exponents, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(VARS) or min(exps) < 0:
                raise PolynomialError(f"bad exponent vector {exps}")
            q = to_rational(c)
            if q:
                clean[exps] = clean.get(exps, Fraction(0)) + q
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[Exponents, Fraction]) -> MultiPoly:
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def const(cls, c) -> MultiPoly:
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> MultiPoly:
        e = [0, 0, 0]
        e[_var_index(name)] = 1
        return cls({tuple(e): 1})

    @classmethod
    def from_coeffs(cls, var: str, coeffs: Sequence[MultiPoly]) -> MultiPoly:
        """Build sum(coeffs[k] * var**k)."""
        x = cls.var(var)
        out = cls()
        for k, c in enumerate(coeffs):
            out = out + _coerce(c) * x**k
        return out

    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self._terms)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(VARS) if any(e[i] for e in self._terms))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0) for e in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0, 0, 0), Fraction(0))

    def degree(self, var: str) -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        i = _var_index(var)
        return max((e[i] for e in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def coefficients(self, var: str) -> list[MultiPoly]:
        """Coefficients in ascending powers of ``var`` (polynomials in the rest)."""
        i = _var_index(var)
        out: list[dict] = [{} for _ in range(self.degree(var) + 1)]
        for e, c in self._terms.items():
            rest = list(e)
            rest[i] = 0
            out[e[i]][tuple(rest)] = c
        return [MultiPoly._raw(t) for t in out]

    def leading_coefficient(self, var: str) -> MultiPoly:
        return self.coefficients(var)[-1]

    def leading_term(self) -> tuple[Exponents, Fraction]:
        if not self._terms:
            raise PolynomialError("zero polynomial has no leading term")
        e = max(self._terms, key=_order_key)
        return e, self._terms[e]

    def derivative(self, var: str) -> MultiPoly:
        i = _var_index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return MultiPoly._raw(out)

    def __add__(self, other) -> MultiPoly:
        other = _coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return _coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        other = _coerce(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise PolynomialError("negative powers are not polynomials")
        result, base = MultiPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=_order_key, reverse=True):
            c = self._terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(VARS, e) if k
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self._terms:
            return Fraction(0)
        den = lcm(*(c.denominator for c in self._terms.values()))
        num = reduce(gcd, (abs(c.numerator) * (den // c.denominator) for c in self._terms.values()))
        return Fraction(num, den)

    def normalized(self) -> MultiPoly:
        """Integer coprime coefficients with a positive leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return MultiPoly._raw({e: v / c for e, v in self._terms.items()})

    def substitute(self, var: str, value) -> MultiPoly:
        """Replace ``var`` by a polynomial or rational."""
        return _substitute(self, var, _coerce(value))

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(e), "coeff": format_rational(self._terms[e])}
            for e in sorted(self._terms)
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> MultiPoly:
        terms: dict[Exponents, Fraction] = {}
        for item in data:
            exps = list(item["exponents"])
            if len(exps) > len(VARS):
                raise PolynomialError(f"exponent vector too long: {exps}")
            exps += [0] * (len(VARS) - len(exps))
            key = tuple(int(x) for x in exps)
            terms[key] = terms.get(key, Fraction(0)) + to_rational(str(item["coeff"]))
        return cls(terms)

    def as_unipoly(self) -> UniPoly:
        if any(e[1] or e[2] for e in self._terms):
            raise PolynomialError(f"not univariate in z: {self}")
        deg = self.degree("z")
        coeffs = [Fraction(0)] * (deg + 1)
        for e, c in self._terms.items():
            coeffs[e[0]] = c
        return UniPoly(coeffs)


def _coerce(x) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, UniPoly):
        return x.to_multipoly()
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return MultiPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def _substitute(p: MultiPoly, var: str, value: MultiPoly) -> MultiPoly:
    coeffs = p.coefficients(var)
    out = MultiPoly()
    for c in reversed(coeffs):
        out = out * value + c
    return out


z = MultiPoly.var("z")
S = MultiPoly.var("S")
T = MultiPoly.var("T")


class UniPoly:
    """Dense univariate polynomial in z, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise PolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, MultiPoly):
            return self.to_multipoly() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self.to_multipoly()})"

    def __str__(self):
        return str(self.to_multipoly())

    def to_multipoly(self) -> MultiPoly:
        return MultiPoly({(k, 0, 0): c for k, c in enumerate(self.coeffs)})

    def to_json(self) -> list[dict]:
        return self.to_multipoly().to_json()

    def __call__(self, x):
        """Horner evaluation; exact for rationals, floating for complex."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else float(c))
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def derivative(self) -> UniPoly:
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def __add__(self, other: UniPoly) -> UniPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> UniPoly:
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            k = to_rational(other)
            return UniPoly(k * c for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def divmod(self, d: UniPoly) -> tuple[UniPoly, UniPoly]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(len(r) - d.degree, 1)
        lead = d.leading
        for k in range(len(r) - 1, d.degree - 1, -1):
            c = r[k] / lead
            if c:
                q[k - d.degree] = c
                for j, dc in enumerate(d.coeffs):
                    r[k - d.degree + j] -= c * dc
        return UniPoly(q), UniPoly(r[: d.degree] if d.degree > 0 else [])

    def monic(self) -> UniPoly:
        return self * (1 / self.leading)

    def normalized(self) -> UniPoly:
        """Integer coprime coefficients, positive leading coefficient."""
        if self.is_zero():
            return self
        return self.to_multipoly().normalized().as_unipoly()

    def gcd(self, other: UniPoly) -> UniPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a


def poly_arith(op: str, p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise PolynomialError(f"unknown operation {op!r}")


def poly_eval(p: MultiPoly, point: Mapping[str, object], kind: str = "exact"):
    """Evaluate ``p`` at ``point``.

    ``kind="exact"`` works over Fractions with no rounding; ``"complex"``
    uses hardware complex floats.  Each variable of ``p`` must be bound.
    """
    missing = [v for v in p.vars if v not in point]
    if missing:
        raise PolynomialError(f"unbound variable(s): {', '.join(missing)}")
    if kind == "exact":
        vals = [to_rational(point[v]) if v in point else Fraction(0) for v in VARS]
        zero = Fraction(0)
    elif kind == "complex":
        vals = [complex(point[v]) if v in point else 0j for v in VARS]
        zero = 0j
    else:
        raise PolynomialError(f"unknown evaluation kind {kind!r}")
    # Horner in z for each (S, T) slice
    slices: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (ez, es, et), c in p.terms.items():
        slices.setdefault((es, et), {})[ez] = c
    total = zero
    for (es, et), row in slices.items():
        acc = zero
        for k in range(max(row), -1, -1):
            c = row.get(k, 0)
            acc = acc * vals[0] + (c if kind == "exact" else float(c))
        total += acc * vals[1] ** es * vals[2] ** et
    return total


def divide_exact(p: MultiPoly, d: MultiPoly) -> MultiPoly | None:
    """Quotient of p by d if d divides p exactly, else None."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lead_e, lead_c = d.leading_term()
    d_terms = d.terms
    r = dict(p.terms)
    q: dict[Exponents, Fraction] = {}
    while r:
        e = max(r, key=_order_key)
        if any(a < b for a, b in zip(e, lead_e)):
            return None
        m = (e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2])
        c = r[e] / lead_c
        q[m] = c
        for de, dc in d_terms.items():
            k = (de[0] + m[0], de[1] + m[1], de[2] + m[2])
            v = r.get(k, 0) - c * dc
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return MultiPoly._raw(q)


def exact_divides(d, p) -> tuple[bool, MultiPoly | None]:
    """Whether ``d`` divides ``p`` exactly, with the quotient when it does."""
    q = divide_exact(_coerce(p), _coerce(d))
    return q is not None, q


def strip_factor(p: MultiPoly, f: MultiPoly) -> tuple[MultiPoly, int]:
    """Divide out the largest power of ``f`` that divides ``p``."""
    k = 0
    if p.is_zero():
        return p, 0
    while True:
        q = divide_exact(p, f)
        if q is None:
            return p, k
        p, k = q, k + 1


def determinant(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free (Bareiss) determinant of a square polynomial matrix."""
    m = [[_coerce(x) for x in row] for row in matrix]
    n = len(m)
    if n == 0:
        return MultiPoly.const(1)
    sign = 1
    prev = MultiPoly.const(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q = divide_exact(num, prev)
                if q is None:  # pragma: no cover - Bareiss guarantees exactness
                    raise PolynomialError("inexact Bareiss step")
                m[i][j] = q
            m[i][k] = MultiPoly()
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: str) -> list[list[MultiPoly]]:
    a = p.coefficients(var)[::-1]  # descending
    b = q.coefficients(var)[::-1]
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = MultiPoly()
    rows = []
    for r in range(n):
        rows.append([zero] * r + a + [zero] * (size - r - m - 1))
    for r in range(m):
        rows.append([zero] * r + b + [zero] * (size - r - n - 1))
    return rows


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant of p and q with respect to ``var``."""
    _var_index(var)
    if p.degree(var) < 1 or q.degree(var) < 1:
        raise PolynomialError(f"both polynomials must involve {var!r}")
    return determinant(sylvester_matrix(p, q, var))


def discriminant(p: MultiPoly, var: str) -> MultiPoly:
    """(-1)^(d(d-1)/2) * res(p, dp/dvar) / lc(p); b^2 - 4ac for quadratics."""
    d = p.degree(var)
    if d < 2:
        raise PolynomialError(f"discriminant needs degree >= 2 in {var!r}, got {d}")
    r = resultant(p, p.derivative(var), var)
    q = divide_exact(r, p.leading_coefficient(var))
    if q is None:  # pragma: no cover - lc always divides res(p, p')
        raise PolynomialError("leading coefficient does not divide the resultant")
    return -q if (d * (d - 1) // 2) % 2 else q


def squarefree_part(p: UniPoly) -> UniPoly:
    """p / gcd(p, p'), normalized to coprime integers with positive lead."""
    if p.is_zero():
        raise PolynomialError("square-free part of the zero polynomial")
    if p.degree == 0:
        return UniPoly([1])
    g = p.gcd(p.derivative())
    q, r = p.divmod(g)
    assert r.is_zero()
    return q.normalized()
