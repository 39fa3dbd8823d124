"""Counting sequences by three unrelated routes.

* recurrences (Waterman's arc-length recurrence, nucleotide transfer systems),
* coefficient extraction from an implicit equation by Newton iteration,
* explicit enumeration of arc sets / strings for small n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import (
    BranchAmbiguityError,
    ModelError,
    ModelInconsistencyError,
    ResourceLimitError,
)
from .polynomial import MultiPoly, poly_eval
from .series import PowerSeries, series_inverse, series_mul

__all__ = [
    "CountSequence",
    "recurrence_counts",
    "transfer_counts",
    "wc_primary_counts",
    "unrestricted_primary",
    "phi_on_series",
    "implicit_series",
    "oracle_count",
    "oracle_wc_count",
    "is_secondary_structure",
    "model_counts",
    "DEFAULT_ORACLE_CAP",
]

DEFAULT_ORACLE_CAP = 14
NUCLEOTIDES = "ACGU"
WC_NEIGHBOURS = {"A": "U", "C": "G", "G": "CU", "U": "AG"}


@dataclass(frozen=True)
class CountSequence:
    model: str
    values: tuple[int, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ModelInconsistencyError(f"{self.model}: negative count")

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "n_max": self.n_max,
            "values": [str(v) for v in self.values],
        }

    @classmethod
    def from_json(cls, data) -> CountSequence:
        values = tuple(int(v) for v in data["values"])
        if len(values) != int(data["n_max"]) + 1:
            raise ValueError("n_max does not match the number of values")
        return cls(str(data["model"]), values)


def recurrence_counts(lam: int, n_max: int, model: str | None = None) -> CountSequence:
    """Structures on n nodes with all arcs of length >= lam, n = 0..n_max.

    S_n = S_{n-1} + sum_{j=0}^{n-1-lam} S_{n-2-j} S_j, with S_0 = ... = S_lam = 1.
    """
    if lam < 2:
        raise ModelError(f"minimum arc length must be >= 2, got {lam}")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    s = [1] * min(lam + 1, n_max + 1)
    for n in range(lam + 1, n_max + 1):
        s.append(s[n - 1] + sum(s[n - 2 - j] * s[j] for j in range(n - lam)))
    return CountSequence(model or f"lambda{lam}", tuple(s))


def transfer_counts(matrix: Sequence[Sequence[int]], n_max: int) -> list[int]:
    """Number of length-n walks in a transfer graph; n = 0 counts the empty string."""
    k = len(matrix)
    state = [1] * k  # strings of length 1 starting at each state
    out = [1]
    for _ in range(1, n_max + 1):
        out.append(sum(state))
        state = [sum(matrix[i][j] * state[j] for j in range(k)) for i in range(k)]
    return out[: n_max + 1]


def wc_primary_counts(n_max: int) -> CountSequence:
    """R(n) for strands whose neighbours pair by Watson-Crick rules.

    Iterates R_A(n) = R_U(n-1), R_C(n) = R_G(n-1), R_G(n) = R_C(n-1) + R_U(n-1),
    R_U(n) = R_A(n-1) + R_G(n-1) from R_X(1) = 1; values[0] = 1 is the empty strand.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    a = c = g = u = 1
    values = [1, 4]
    for _ in range(2, n_max + 1):
        a, c, g, u = u, g, c + u, a + g
        values.append(a + c + g + u)
    return CountSequence("primary-wc", tuple(values))


def unrestricted_primary(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return 4**n


def _z_series(p: MultiPoly, order: int) -> PowerSeries:
    u = p.as_unipoly()
    return PowerSeries(u.coeffs[: order + 1] or (0,)).truncate(order)


def phi_on_series(phi: MultiPoly, s: PowerSeries) -> PowerSeries:
    """phi(z, s(z)) truncated at the order of ``s`` (Horner in S)."""
    order = s.order
    acc = PowerSeries.zeros(order)
    for c in reversed(phi.coefficients("S")):
        acc = series_mul(acc, s) + _z_series(c, order)
    return acc


def implicit_series(model, n_max: int) -> PowerSeries:
    """Coefficients 0..n_max of the series root of phi(z, S) = 0 with S(0) = s0.

    Newton iteration S <- S - phi(S) / phi_S(S), doubling the number of
    correct coefficients each step.
    """
    phi: MultiPoly = model.phi
    s0 = Fraction(model.s0)
    dphi = phi.derivative("S")
    if poly_eval(phi, {"z": 0, "S": s0}) != 0 or poly_eval(dphi, {"z": 0, "S": s0}) == 0:
        raise BranchAmbiguityError(
            f"{model.name}: S(0) = {s0} is not a simple root of phi(0, S)"
        )
    s = PowerSeries([s0])
    prec = 1
    while prec < n_max + 1:
        prec = min(2 * prec, n_max + 1)
        s = s.truncate(prec - 1)
        step = series_mul(phi_on_series(phi, s), series_inverse(phi_on_series(dphi, s)))
        s = s - step
    s = s.truncate(n_max)
    if getattr(model, "counting", False):
        bad = next((n for n, c in enumerate(s) if c.denominator != 1 or c < 0), None)
        if bad is not None:
            raise ModelInconsistencyError(
                f"{model.name}: coefficient {bad} is {s[bad]}, not a non-negative integer"
            )
    return s


def _crosses(i: int, j: int, arcs: list[tuple[int, int]]) -> bool:
    for a, b in arcs:
        if a < i < b < j or i < a < j < b:
            return True
    return False


def oracle_count(n: int, lam: int, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """Count non-crossing arc sets on n nodes with arc length >= lam by backtracking.

    Independent of the recurrence: arcs are placed one at a time, left
    endpoint increasing, and each placement is checked against every arc
    already chosen.
    """
    if lam < 2:
        raise ModelError(f"minimum arc length must be >= 2, got {lam}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > cap:
        raise ResourceLimitError(f"oracle limited to n <= {cap} (got {n}); raise the cap")
    used = [False] * (n + 1)
    arcs: list[tuple[int, int]] = []

    def extend(i: int) -> int:
        # i = next node allowed as a left endpoint
        total = 1  # stop adding arcs here
        for left in range(i, n + 1):
            if used[left]:
                continue
            for right in range(left + lam, n + 1):
                if used[right] or _crosses(left, right, arcs):
                    continue
                used[left] = used[right] = True
                arcs.append((left, right))
                total += extend(left + 1)
                arcs.pop()
                used[left] = used[right] = False
        return total

    return extend(1)


def is_secondary_structure(adjacency: Sequence[Sequence[int]]) -> bool:
    """Check the three adjacency-matrix axioms (0-based indices).

    1. consecutive backbone nodes are adjacent;
    2. besides its backbone neighbours, each node has at most one partner;
    3. if i ~ j (i < j, non-backbone) and i < k < j, every partner of k is in (i, j).
    """
    n = len(adjacency)
    for i in range(n):
        if adjacency[i][i]:
            return False
        for j in range(n):
            if adjacency[i][j] != adjacency[j][i]:
                return False
    if any(not adjacency[i][i + 1] for i in range(n - 1)):
        return False
    partners = []
    for i in range(n):
        extra = [j for j in range(n) if adjacency[i][j] and abs(i - j) != 1]
        if len(extra) > 1:
            return False
        partners.append(extra[0] if extra else None)
    for i, j in enumerate(partners):
        if j is None or j < i:
            continue
        for k in range(i + 1, j):
            l = partners[k]
            if l is not None and not (i < l < j):
                return False
    return True


def oracle_wc_count(n: int, cap: int = 9) -> int:
    """Enumerate all 4^n strands and keep those with Watson-Crick neighbours."""
    if n > cap:
        raise ResourceLimitError(f"string oracle limited to n <= {cap} (got {n})")
    if n == 0:
        return 1
    return sum(
        all(b in WC_NEIGHBOURS[a] for a, b in zip(s, s[1:]))
        for s in product(NUCLEOTIDES, repeat=n)
    )


def model_counts(model, n_max: int) -> CountSequence:
    """Counts for any model, by its own recurrence when it has one."""
    if model.kind == "recurrence" and model.lam is not None:
        return recurrence_counts(model.lam, n_max, model.name)
    if model.kind == "recurrence" and model.transfer is not None:
        return CountSequence(model.name, tuple(transfer_counts(model.transfer, n_max)))
    s = implicit_series(model, n_max)
    if not s.is_integral() or any(c < 0 for c in s):
        raise ModelInconsistencyError(f"{model.name}: series is not a counting sequence")
    return CountSequence(model.name, tuple(int(c) for c in s))
