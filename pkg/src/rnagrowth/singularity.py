"""Dominant singularities, growth constants and the root test.

Roots of the radicand are found in floating point (Durand-Kerner, with
Aberth-Ehrlich as fallback), polished by Newton steps, and real roots are
then bracketed by exact rational bisection.  Printed digits are read off
those brackets, never off the floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .coeffs import CountSequence, model_counts
from .errors import ConvergenceError, InsufficientDataError, StrategyError
from .polynomial import (
    MultiPoly,
    UniPoly,
    discriminant,
    exact_divides,
    squarefree_part,
    strip_factor,
    z,
)

__all__ = [
    "RootSet",
    "Singularity",
    "RootTest",
    "GrowthReport",
    "find_roots",
    "refine_bracket",
    "dominant_singularity",
    "root_test",
    "growth_report",
    "singular_polynomial",
    "bound_violations",
    "int_log",
    "decimal_string",
    "DEFAULT_TOL",
    "TIE_TOLERANCE",
    "PUBLISHED_REL_TOL",
]

DEFAULT_TOL = 1e-12
TIE_TOLERANCE = 1e-9
PUBLISHED_REL_TOL = 5e-6
MAX_ITER = 500
_ANGLE_OFFSET = 0.4 * math.sqrt(2)  # irrational, keeps guesses off symmetry axes

Bracket = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class RootSet:
    poly: UniPoly  # square-free, integer-normalized
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    multiplicity_flags: tuple[bool, ...]
    certified_intervals: tuple[Optional[Bracket], ...]

    def __len__(self):
        return len(self.roots)

    def real_indices(self) -> list[int]:
        return [i for i, b in enumerate(self.certified_intervals) if b is not None]

    def to_json(self, digits: int) -> list[dict]:
        out = []
        order = sorted(range(len(self.roots)), key=lambda i: (abs(self.roots[i]), self.roots[i].imag))
        for i in order:
            r = self.roots[i]
            iv = self.certified_intervals[i]
            out.append(
                {
                    "re": _fixed(r.real, digits),
                    "im": _fixed(r.imag, digits),
                    "modulus": _fixed(abs(r), digits),
                    "residual": f"{self.residuals[i]:.2e}",
                    "multiple": self.multiplicity_flags[i],
                    "interval": None if iv is None else [_ratstr(iv[0]), _ratstr(iv[1])],
                }
            )
        return out


def _fixed(x: float, digits: int) -> str:
    s = f"{x:.{digits}f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def _ratstr(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _scale(coeffs: Sequence[float], r: complex) -> float:
    a = abs(r)
    return sum(abs(c) * a**k for k, c in enumerate(coeffs)) or 1.0


def _durand_kerner(desc: np.ndarray, guesses: np.ndarray, tol: float, max_iter: int):
    zs = guesses.copy()
    n = len(zs)
    for _ in range(max_iter):
        vals = np.polyval(desc, zs)
        diff = zs[:, None] - zs[None, :]
        np.fill_diagonal(diff, 1.0)
        step = vals / np.prod(diff, axis=1)
        zs = zs - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(zs))):
            return zs, True
        if not np.all(np.isfinite(zs)):
            return guesses, False
    return zs, False


def _aberth(desc: np.ndarray, guesses: np.ndarray, tol: float, max_iter: int):
    zs = guesses.copy()
    ddesc = np.polyder(desc)
    for _ in range(max_iter):
        w = np.polyval(desc, zs) / np.polyval(ddesc, zs)
        diff = zs[:, None] - zs[None, :]
        np.fill_diagonal(diff, np.inf)
        corr = np.sum(1.0 / diff, axis=1)
        step = w / (1.0 - w * corr)
        zs = zs - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(zs))):
            return zs, True
    return zs, False


def _sign(p: UniPoly, x: Fraction) -> int:
    v = p(x)
    return (v > 0) - (v < 0)


def refine_bracket(p: UniPoly, lo: Fraction, hi: Fraction, width: Fraction) -> Bracket:
    """Bisect a sign-change bracket of ``p`` in exact arithmetic down to ``width``."""
    if lo == hi:
        return lo, hi
    slo = _sign(p, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = _sign(p, mid)
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _certify_real(p: UniPoly, x: float, tol: float) -> Optional[Bracket]:
    xq = Fraction(x)
    if p(xq) == 0:
        return xq, xq
    for k in (40, 33, 26, 20):
        delta = Fraction(1, 2**k) * max(1, abs(math.ceil(abs(x))))
        lo, hi = xq - delta, xq + delta
        slo, shi = _sign(p, lo), _sign(p, hi)
        if slo == 0:
            return lo, lo
        if shi == 0:
            return hi, hi
        if slo != shi:
            return refine_bracket(p, lo, hi, Fraction(tol))
    return None


def find_roots(p, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> RootSet:
    """All complex roots of ``p`` (reduced to its square-free part)."""
    original = p if isinstance(p, UniPoly) else p.as_unipoly()
    if original.is_zero() or original.degree < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")
    sf = squarefree_part(original)
    d = sf.degree
    coeffs = sf.float_coeffs()
    desc = np.array(coeffs[::-1], dtype=complex) / coeffs[-1]
    radius = max(abs(c) for c in desc[1:]) + 1.0
    angles = 2 * np.pi * np.arange(d) / d + _ANGLE_OFFSET
    guesses = radius * np.exp(1j * angles)

    zs, ok = _durand_kerner(desc, guesses, tol, max_iter)
    if not ok:
        zs, ok = _aberth(desc, zs if np.all(np.isfinite(zs)) else guesses, tol, max_iter)
    if not ok:
        res = float(np.max(np.abs(np.polyval(desc, zs))))
        raise ConvergenceError(
            f"root iteration did not converge in {max_iter} steps (residual {res:.3e})",
            roots=tuple(complex(r) for r in zs),
            residual=res,
        )
    ddesc = np.polyder(desc)
    polished = []
    for r in zs:
        for _ in range(3):
            dv = np.polyval(ddesc, r)
            if dv == 0:
                break
            nxt = r - np.polyval(desc, r) / dv
            if abs(nxt - r) > 1e-6 * max(1.0, abs(r)):  # Newton jumped; keep the iterate
                break
            r = nxt
        polished.append(complex(r))

    gcd_part = original.gcd(original.derivative())
    gcoeffs = gcd_part.float_coeffs()
    roots, residuals, flags, intervals = [], [], [], []
    worst = 0.0
    for r in polished:
        bracket = None
        if abs(r.imag) <= 1e-7 * max(1.0, abs(r)):
            bracket = _certify_real(sf, r.real, tol)
            if bracket is not None:
                inside = bracket[0] <= Fraction(r.real) <= bracket[1]
                r = complex(r.real if inside else float((bracket[0] + bracket[1]) / 2), 0.0)
        val = abs(sf(r))
        residuals.append(val)
        worst = max(worst, val / _scale(coeffs, r))
        roots.append(r)
        intervals.append(bracket)
        multiple = gcd_part.degree >= 1 and abs(gcd_part(r)) <= 1e-8 * _scale(gcoeffs, r)
        flags.append(bool(multiple))
    if worst > max(tol, 1e-10) * 1e3:
        raise ConvergenceError(
            f"roots failed the residual check (relative residual {worst:.3e})",
            roots=tuple(roots),
            residual=worst,
        )
    return RootSet(sf, tuple(roots), tuple(residuals), tuple(flags), tuple(intervals))


@dataclass(frozen=True)
class Singularity:
    R: float
    bracket: Optional[Bracket]  # exact enclosure of R when it is a certified real root
    root: complex
    tie_count: int
    closer_count: int  # candidates strictly inside |z| < R (ignored by positive-real)
    strategy: str


def dominant_singularity(
    rs: RootSet, strategy: str = "positive-real", tie_tolerance: float = TIE_TOLERANCE
) -> Singularity:
    """Pick R: the smallest positive real root, or the smallest modulus."""
    idx = [i for i, r in enumerate(rs.roots) if abs(r) > 0]
    if not idx:
        raise StrategyError("no nonzero candidate singularities")
    if strategy == "positive-real":
        pos = [i for i in idx if rs.certified_intervals[i] is not None and rs.certified_intervals[i][0] > 0]
        if not pos:
            raise StrategyError("no certified positive real root; try strategy 'min-modulus'")
        best = min(pos, key=lambda i: rs.certified_intervals[i][0])
        bracket = rs.certified_intervals[best]
    elif strategy == "min-modulus":
        best = min(idx, key=lambda i: abs(rs.roots[i]))
        iv = rs.certified_intervals[best]
        bracket = None
        if iv is not None:
            bracket = iv if iv[0] > 0 else (-iv[1], -iv[0])
    else:
        raise StrategyError(f"unknown strategy {strategy!r}")
    R = abs(rs.roots[best])
    ties = sum(1 for i in idx if abs(abs(rs.roots[i]) - R) <= tie_tolerance)
    closer = sum(1 for i in idx if abs(rs.roots[i]) < R - tie_tolerance)
    return Singularity(R, bracket, rs.roots[best], ties, closer, strategy)


def int_log(x: int) -> float:
    """Natural log of a positive integer from its bit length and leading 53 bits."""
    if x <= 0:
        raise ValueError("int_log needs a positive integer")
    shift = max(x.bit_length() - 53, 0)
    return math.log(x >> shift) + shift * math.log(2)


@dataclass(frozen=True)
class RootTest:
    n_used: int
    max_nth_root: float
    argmax: int
    final_ratio: float
    lag: int  # final_ratio = (S_N / S_{N-lag})^(1/lag), lag > 1 for periodic supports
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "n_used": self.n_used,
            "max_nth_root": f"{self.max_nth_root:.10f}",
            "argmax": self.argmax,
            "final_ratio": f"{self.final_ratio:.10f}",
            "lag": self.lag,
            "verdict": self.verdict,
        }


def root_test(counts: CountSequence | Sequence[int], growth: float, rel_tol: float = 0.01) -> RootTest:
    """Empirical check of the bound S_n <= growth^n and of the growth rate.

    Passes iff max_n S_n^(1/n) <= growth (1 + rel_tol) and the last ratio of
    consecutive nonzero coefficients is within rel_tol of growth.
    """
    values = counts.values if isinstance(counts, CountSequence) else tuple(counts)
    n_max = len(values) - 1
    if n_max < 10:
        raise InsufficientDataError(f"root test needs n_max >= 10, got {n_max}")
    growth = float(growth)
    if growth <= 1:
        raise ValueError("root test expects a growth constant > 1")
    best, argmax = 0.0, 0
    for n in range(1, n_max + 1):
        v = abs(int(values[n]))
        if v:
            r = math.exp(int_log(v) / n)
            if r > best:
                best, argmax = r, n
    nz = [n for n in range(n_max + 1) if values[n]]
    if len(nz) < 2:
        raise InsufficientDataError("root test needs two nonzero coefficients")
    last, prev = nz[-1], nz[-2]
    lag = last - prev
    ratio = math.exp((int_log(abs(values[last])) - int_log(abs(values[prev]))) / lag)
    ok = best <= growth * (1 + rel_tol) and abs(ratio - growth) <= rel_tol * growth
    return RootTest(n_max, best, argmax, ratio, lag, "pass" if ok else "fail")


def bound_violations(counts: CountSequence | Sequence[int], growth: float) -> list[int]:
    """Indices n >= 1 where S_n > growth^n (compared through logarithms)."""
    values = counts.values if isinstance(counts, CountSequence) else tuple(counts)
    lb = math.log(growth)
    return [
        n
        for n in range(1, len(values))
        if values[n] and int_log(abs(values[n])) > n * lb * (1 + 1e-12)
    ]


def decimal_string(q: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 50
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


def _stable_digits(p: UniPoly, bracket: Bracket, digits: int, invert: bool) -> tuple[str, Bracket]:
    lo, hi = bracket
    width = Fraction(1, 10 ** (digits + 4))
    floor = Fraction(1, 10 ** (digits + 40))
    while True:
        lo, hi = refine_bracket(p, lo, hi, width)
        a, b = (1 / hi, 1 / lo) if invert else (lo, hi)
        sa, sb = decimal_string(a, digits), decimal_string(b, digits)
        if sa == sb or width < floor:
            return decimal_string((a + b) / 2, digits), (lo, hi)
        width /= 1000


def singular_polynomial(phi: MultiPoly, radicand: UniPoly) -> UniPoly:
    """Radicand times the leading coefficient in S, with factors of z removed."""
    lc = phi.leading_coefficient("S")
    cand = radicand.to_multipoly()
    if phi.degree("S") >= 2:
        cand = cand * lc
    cand, _ = strip_factor(cand, z)
    return cand.as_unipoly()


def derived_radicand(phi: MultiPoly) -> tuple[UniPoly, list[str]]:
    """Discriminant in S (or the pole polynomial for linear equations), cleaned."""
    notes = []
    if phi.degree("S") >= 2:
        raw = discriminant(phi, "S")
    else:
        raw = phi.leading_coefficient("S")
        notes.append("linear equation: radicand is the pole polynomial")
    raw, k = strip_factor(raw, z)
    if k:
        notes.append(f"stripped z^{k}")
    raw, k = strip_factor(raw, 1 - z)
    if k:
        notes.append(f"stripped (1 - z)^{k}")
    return raw.as_unipoly(), notes


@dataclass(frozen=True)
class GrowthReport:
    model: str
    radicand: UniPoly
    radicand_source: str
    R: str
    growth: str
    R_value: float
    growth_value: float
    R_bracket: Optional[Bracket]
    candidates: RootSet
    tie_count: int
    closer_count: int
    strategy: str
    root_test: Optional[RootTest]
    published_growth: Optional[str]
    published_rel_error: Optional[float]
    published_divides_discriminant: Optional[bool]
    digits: int
    notes: tuple[str, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.root_test is not None and self.root_test.passed

    @property
    def matches_published(self) -> Optional[bool]:
        if self.published_rel_error is None:
            return None
        return self.published_rel_error <= PUBLISHED_REL_TOL

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "radicand": self.radicand.to_json(),
            "radicand_text": str(self.radicand),
            "radicand_source": self.radicand_source,
            "R": self.R,
            "growth": self.growth,
            "strategy": self.strategy,
            "tie_count": self.tie_count,
            "closer_candidates": self.closer_count,
            "published_growth": self.published_growth,
            "abs_rel_error": None
            if self.published_rel_error is None
            else f"{self.published_rel_error:.3e}",
            "published_match": self.matches_published,
            "published_divides_discriminant": self.published_divides_discriminant,
            "root_test": None if self.root_test is None else self.root_test.to_json(),
            "certified": self.certified,
            "candidates": self.candidates.to_json(self.digits),
            "notes": list(self.notes),
        }


def growth_report(
    model,
    n_validate: int = 200,
    digits: int = 7,
    rel_tol: float = 0.01,
    strategy: str = "positive-real",
    prefer_published: bool = True,
    tol: float = DEFAULT_TOL,
    tie_tolerance: float = TIE_TOLERANCE,
) -> GrowthReport:
    """Growth constant 1/R for a model, validated by the root test."""
    phi: MultiPoly = model.phi
    derived, notes = derived_radicand(phi)
    divides = None
    if model.published_radicand is not None and phi.degree("S") >= 2:
        divides, _ = exact_divides(model.published_radicand, discriminant(phi, "S"))
    if prefer_published and model.published_radicand is not None:
        radicand, source = model.published_radicand, "published"
        notes = []
    else:
        radicand, source = derived, "derived"
    rs = find_roots(singular_polynomial(phi, radicand), tol=tol)
    sing = dominant_singularity(rs, strategy, tie_tolerance)

    if sing.bracket is not None:
        R_str, bracket = _stable_digits(rs.poly, sing.bracket, digits, invert=False)
        growth_str, bracket = _stable_digits(rs.poly, bracket, digits, invert=True)
        mid = (bracket[0] + bracket[1]) / 2
        R_value, growth_value = float(mid), float(1 / mid) if mid else math.inf
        growth_exact = 1 / mid
    else:
        bracket = None
        R_value = sing.R
        growth_value = 1 / sing.R
        growth_exact = Fraction(growth_value)
        R_str = decimal_string(Fraction(R_value), digits)
        growth_str = decimal_string(growth_exact, digits)
        notes = [*notes, "R from floating point modulus (not a certified real root)"]

    rel_err = None
    if model.published_growth is not None:
        pub = Fraction(model.published_growth)
        rel_err = float(abs(growth_exact - pub) / pub)

    test = None
    if n_validate is not None and n_validate > 0:
        test = root_test(model_counts(model, n_validate), growth_value, rel_tol)

    return GrowthReport(
        model=model.name,
        radicand=radicand,
        radicand_source=source,
        R=R_str,
        growth=growth_str,
        R_value=R_value,
        growth_value=growth_value,
        R_bracket=bracket,
        candidates=rs,
        tie_count=sing.tie_count,
        closer_count=sing.closer_count,
        strategy=strategy,
        root_test=test,
        published_growth=model.published_growth,
        published_rel_error=rel_err,
        published_divides_discriminant=divides,
        digits=digits,
        notes=tuple(notes),
    )
