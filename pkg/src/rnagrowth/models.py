"""Registry of structure families and their implicit equations.

Every model ends up with an equation ``phi(z, S) = 0`` plus the value
``s0 = S(0)`` that singles out the power-series branch.  Recurrence
families carry their recurrence data next to ``phi`` so counts can be
produced by two unrelated routes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cache
from pathlib import Path
from typing import Mapping

from .coeffs import transfer_counts
from .errors import (
    BranchAmbiguityError,
    DegenerateSystemError,
    ModelError,
    ModelLookupError,
)
from .polynomial import (
    MultiPoly,
    S,
    T,
    UniPoly,
    determinant,
    poly_eval,
    resultant,
    strip_factor,
    z,
)
from .series import format_rational, to_rational

__all__ = [
    "ModelSpec",
    "lambda_phi",
    "eliminate_auxiliary",
    "get_model",
    "model_names",
    "model_from_dict",
    "load_model_file",
    "resolve_model",
    "check_model",
    "WC_TRANSFER",
    "FREE_TRANSFER",
]

KINDS = ("recurrence", "algebraic", "system")

# Row = first nucleotide, columns = allowed second nucleotide, order A, C, G, U.
WC_TRANSFER = (
    (0, 0, 0, 1),  # A -> U
    (0, 0, 1, 0),  # C -> G
    (0, 1, 0, 1),  # G -> C, U
    (1, 0, 1, 0),  # U -> A, G
)
FREE_TRANSFER = tuple((1, 1, 1, 1) for _ in range(4))


@dataclass(frozen=True)
class ModelSpec:
    name: str
    kind: str
    phi: MultiPoly | None = None
    s0: Fraction | None = None
    lam: int | None = None
    transfer: tuple[tuple[int, ...], ...] | None = None
    eq1: MultiPoly | None = None
    eq2: MultiPoly | None = None
    published_radicand: UniPoly | None = None
    published_growth: str | None = None
    counting: bool = True
    description: str = ""
    provenance: tuple[str, ...] = field(default=())

    @property
    def is_lambda(self) -> bool:
        return self.kind == "recurrence" and self.lam is not None

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "kind": self.kind}
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.s0 is not None:
            out["s0"] = format_rational(self.s0)
        if self.phi is not None:
            out["phi"] = self.phi.to_json()
        if self.eq1 is not None:
            out["eq1"] = self.eq1.to_json()
            out["eq2"] = self.eq2.to_json()
        if self.published_radicand is not None:
            out["published_radicand"] = self.published_radicand.to_json()
        if self.published_growth is not None:
            out["published_growth"] = self.published_growth
        return out


def lambda_phi(lam: int) -> MultiPoly:
    """z^2 S^2 - (1 - z + z^2 + ... + z^lam) S + 1 for minimum arc length lam."""
    if lam < 2:
        raise ModelError(f"minimum arc length must be >= 2, got {lam}")
    middle = 1 - z
    for k in range(2, lam + 1):
        middle = middle + z**k
    return z**2 * S**2 - middle * S + 1


def transfer_phi(matrix) -> tuple[MultiPoly, int]:
    """Linear equation den(z) S - num(z) for strings with a transfer matrix.

    ``S`` counts strings by length with S(0) = 1; den = det(I - z M).
    Returns phi and the degree of the reduced denominator.
    """
    n = len(matrix)
    rows = [
        [(1 if i == j else 0) - z * matrix[i][j] for j in range(n)]
        for i in range(n)
    ]
    den = determinant(rows).as_unipoly()
    counts = transfer_counts(matrix, den.degree + 1)
    num = [Fraction(0)] * (den.degree + 1)
    for k in range(den.degree + 1):
        num[k] = sum(den.coeffs[j] * counts[k - j] for j in range(min(k, den.degree) + 1))
    num = UniPoly(num)
    g = den.gcd(num)  # cancel common factors so den holds only true poles
    den, num = den.divmod(g)[0], num.divmod(g)[0]
    c = den.coeffs[0]
    return (den * (1 / c)).to_multipoly() * S - (num * (1 / c)).to_multipoly(), den.degree


def _simple_root_at_origin(phi: MultiPoly, s0) -> bool:
    point = {"z": 0, "S": s0}
    return poly_eval(phi, point) == 0 and poly_eval(phi.derivative("S"), point) != 0


def select_s0(phi: MultiPoly, preferred: Fraction | None = None) -> Fraction:
    """Pick S(0) as a simple root of phi(0, S).

    A series counting structures starts with the number of empty
    structures, so only 0 and 1 are considered when nothing is given.
    """
    if preferred is not None:
        if not _simple_root_at_origin(phi, preferred):
            raise BranchAmbiguityError(
                f"S(0) = {format_rational(preferred)} is not a simple root of phi(0, S)"
            )
        return Fraction(preferred)
    found = [Fraction(c) for c in (0, 1) if _simple_root_at_origin(phi, c)]
    if len(found) != 1:
        raise BranchAmbiguityError(
            "cannot fix the power-series branch: "
            f"simple roots of phi(0, S) among {{0, 1}}: {[str(f) for f in found]}"
        )
    return found[0]


def _strip_spurious(phi: MultiPoly) -> tuple[MultiPoly, list[str]]:
    notes = []
    phi, k = strip_factor(phi, z)
    if k:
        notes.append(f"stripped z^{k}")
    phi, k = strip_factor(phi, 1 - z)
    if k:
        notes.append(f"stripped (1 - z)^{k}")
    c = phi.normalized()
    if c != phi:
        notes.append("normalized to coprime integer coefficients")
    return c, notes


def eliminate_auxiliary(spec: ModelSpec) -> ModelSpec:
    """Turn a two-equation system in (z, S, T) into an algebraic model for S."""
    if spec.kind != "system" or spec.eq1 is None or spec.eq2 is None:
        raise ModelError(f"model {spec.name!r} is not a two-equation system")
    if spec.eq1.degree("T") < 1 or spec.eq2.degree("T") < 1:
        raise ModelError("both equations must involve the auxiliary series T")
    res = resultant(spec.eq1, spec.eq2, "T")
    if res.is_zero() or res.degree("S") < 1:
        raise DegenerateSystemError(
            f"eliminating T from {spec.name!r} leaves no equation for S"
        )
    phi, notes = _strip_spurious(res)
    s0 = select_s0(phi, spec.s0)
    return replace(
        spec,
        phi=phi,
        s0=s0,
        provenance=spec.provenance + ("resultant of eq1, eq2 w.r.t. T", *notes),
    )


def check_model(spec: ModelSpec) -> ModelSpec:
    """Validate invariants; returns the spec unchanged on success."""
    if spec.kind not in KINDS:
        raise ModelError(f"unknown kind {spec.kind!r}; expected one of {KINDS}")
    if spec.kind == "recurrence" and spec.lam is not None and spec.lam < 2:
        raise ModelError(f"lambda must be >= 2, got {spec.lam}")
    if spec.phi is None or spec.s0 is None:
        raise ModelError(f"model {spec.name!r} has no implicit equation")
    if set(spec.phi.vars) - {"z", "S"}:
        raise ModelError("phi may only involve z and S")
    if spec.phi.degree("S") < 1:
        raise ModelError("phi must involve S")
    if not _simple_root_at_origin(spec.phi, spec.s0):
        raise BranchAmbiguityError(
            f"model {spec.name!r}: phi(0, s0) must vanish with nonzero dphi/dS"
        )
    return spec


def _lambda_model(lam: int, name: str | None = None, **extra) -> ModelSpec:
    return ModelSpec(
        name=name or f"lambda{lam}",
        kind="recurrence",
        lam=lam,
        phi=lambda_phi(lam),
        s0=Fraction(1),
        description=f"secondary structures with arc length >= {lam}",
        **extra,
    )


def _transfer_model(name: str, matrix, description: str) -> ModelSpec:
    phi, _ = transfer_phi(matrix)
    return ModelSpec(
        name=name,
        kind="recurrence",
        transfer=matrix,
        phi=phi,
        s0=Fraction(1),
        description=description,
    )


def _system(name, eq1, eq2, **extra) -> ModelSpec:
    return eliminate_auxiliary(ModelSpec(name=name, kind="system", eq1=eq1, eq2=eq2, **extra))


def _presets() -> list[ModelSpec]:
    x = z
    P = (x**4 + 2 * x**3 + x**2 + x - 1) ** 2 - 4 * x**3 * (1 + x) ** 2
    return [
        _transfer_model("primary-free", FREE_TRANSFER, "unrestricted strings over A, C, G, U"),
        _transfer_model(
            "primary-wc", WC_TRANSFER, "strings whose neighbours form Watson-Crick pairs"
        ),
        _lambda_model(
            2,
            published_radicand=(1 - 2 * x - x**2 - 2 * x**3 + x**4).as_unipoly(),
            published_growth="2.6180340",
        ),
        _lambda_model(
            3,
            published_radicand=((1 - 2 * x - x**2) * (1 - x**4)).as_unipoly(),
            published_growth="2.4142136",
        ),
        _lambda_model(4, published_growth="2.28879"),
        _system(
            "saturated",
            # S = z + z^2 + zT + z^2 T + z^2 S + z^2 S^2 ;  T = z^2 S + z^2 T S
            z + z**2 + z * T + z**2 * T + z**2 * S + z**2 * S**2 - S,
            z**2 * S + z**2 * T * S - T,
            published_radicand=(
                -4 * z**7 - 4 * z**6 + 32 * z**5 + 60 * z**4 + 35 * z**3 + 6 * z**2 - 5 * z - 4
            ).as_unipoly(),
            published_growth="2.354673",
            description="saturated secondary structures",
        ),
        _system(
            "canonical",
            # T plays the role of the auxiliary series Q
            z + z * S + z**2 * T + z**2 * S * T - S,
            z**3 + z**2 * T + z**4 * S * T + z**3 * S - T,
            published_radicand=(
                z**10 - 4 * z**9 - 2 * z**8 + 6 * z**7 + 3 * z**6 - 8 * z**5
                - z**4 + 4 * z**3 - z**2 - 2 * z + 1
            ).as_unipoly(),
            published_growth="1.967977",
            description="canonical secondary structures",
        ),
        ModelSpec(
            name="locally-optimal",
            kind="algebraic",
            # reversed quadratic formula for the closed form S_0(z)
            phi=z**2 * (1 + z) ** 2 * S**2 - (1 - z - z**2 * (1 + z) ** 2) * S + z,
            s0=Fraction(0),
            published_radicand=P.as_unipoly(),
            published_growth="3.0795963",
            description="locally optimal secondary structures",
            provenance=("implicit quadratic reconstructed from the closed form",),
        ),
        ModelSpec(
            name="pi-shapes",
            kind="algebraic",
            phi=z**2 * S**2 + z**2 * S + z**2 - S,
            s0=Fraction(0),
            published_radicand=(1 - 2 * z**2 - 3 * z**4).as_unipoly(),
            published_growth="1.7320508",
            description="pi-shapes",
        ),
        ModelSpec(
            name="pi-shapes-compatible",
            kind="algebraic",
            phi=z**2 * (1 - z) ** 2 * S**2 + (z - 1 + z**5 - z**6) * S + z**5,
            s0=Fraction(0),
            published_radicand=(z**10 - 4 * z**7 - 2 * z**5 + 1).as_unipoly(),
            published_growth="1.32218",
            description="pi-shapes compatible with a sequence",
        ),
    ]


@cache
def _registry() -> dict[str, ModelSpec]:
    return {m.name: check_model(m) for m in _presets()}


def model_names() -> list[str]:
    return sorted(_registry())


def get_model(name: str) -> ModelSpec:
    try:
        return _registry()[name]
    except KeyError:
        raise ModelLookupError(
            f"unknown model {name!r}; available: {', '.join(model_names())}"
        ) from None


def _poly_field(data: Mapping, key: str) -> MultiPoly | None:
    if data.get(key) is None:
        return None
    try:
        return MultiPoly.from_json(data[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"field {key!r}: {exc}") from exc


def model_from_dict(data: Mapping) -> ModelSpec:
    """Build and validate a model from the JSON model-file schema."""
    try:
        name = str(data["name"])
        kind = str(data["kind"])
    except KeyError as exc:
        raise ModelError(f"model file is missing field {exc.args[0]!r}") from None
    if kind not in KINDS:
        raise ModelError(f"field 'kind': unknown kind {kind!r}; expected one of {KINDS}")
    try:
        s0 = to_rational(str(data["s0"])) if data.get("s0") is not None else None
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"field 's0': {exc}") from exc
    radicand = _poly_field(data, "published_radicand")
    if radicand is not None:
        try:
            radicand = radicand.as_unipoly()
        except ValueError as exc:
            raise ModelError(f"field 'published_radicand': {exc}") from exc
    growth = data.get("published_growth")
    extra = dict(
        published_radicand=radicand,
        published_growth=str(growth) if growth is not None else None,
        provenance=("model file",),
    )

    if kind == "recurrence":
        lam = data.get("lambda")
        if not isinstance(lam, int) or isinstance(lam, bool):
            raise ModelError("field 'lambda': recurrence models need an integer lambda")
        if lam < 2:
            raise ModelError(f"field 'lambda': must be >= 2, got {lam}")
        return check_model(_lambda_model(lam, name=name, **extra))
    if kind == "algebraic":
        phi = _poly_field(data, "phi")
        if phi is None:
            raise ModelError("field 'phi': required for algebraic models")
        if set(phi.vars) - {"z", "S"}:
            raise ModelError("field 'phi': may only involve z and S")
        return check_model(
            ModelSpec(name=name, kind=kind, phi=phi, s0=select_s0(phi, s0), **extra)
        )
    eq1, eq2 = _poly_field(data, "eq1"), _poly_field(data, "eq2")
    if eq1 is None or eq2 is None:
        raise ModelError("fields 'eq1' and 'eq2': required for system models")
    return check_model(
        eliminate_auxiliary(ModelSpec(name=name, kind=kind, eq1=eq1, eq2=eq2, s0=s0, **extra))
    )


def load_model_file(path) -> ModelSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ModelError(f"{path}: expected a JSON object")
    return model_from_dict(data)


def resolve_model(ref: str) -> ModelSpec:
    """A preset name, or a path to a JSON model file."""
    if ref in _registry():
        return _registry()[ref]
    if ref.endswith(".json") or Path(ref).is_file():
        if not Path(ref).is_file():
            raise ModelLookupError(f"model file not found: {ref}")
        return load_model_file(ref)
    return get_model(ref)
