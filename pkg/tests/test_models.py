import json
from fractions import Fraction

import pytest

from rnagrowth.errors import (
    BranchAmbiguityError,
    DegenerateSystemError,
    ModelError,
    ModelLookupError,
)
from rnagrowth.models import (
    ModelSpec,
    eliminate_auxiliary,
    get_model,
    lambda_phi,
    load_model_file,
    model_from_dict,
    model_names,
    resolve_model,
)
from rnagrowth.polynomial import S, T, discriminant, exact_divides, poly_eval, z

PRESETS = [
    "canonical",
    "lambda2",
    "lambda3",
    "lambda4",
    "locally-optimal",
    "pi-shapes",
    "pi-shapes-compatible",
    "primary-free",
    "primary-wc",
    "saturated",
]


def test_registry_contents():
    assert model_names() == PRESETS


def test_lambda_phi():
    assert lambda_phi(2) == z**2 * S**2 + (z - 1 - z**2) * S + 1
    assert discriminant(lambda_phi(3), "S") == 1 - 2 * z - z**2 - z**4 + 2 * z**5 + z**6
    assert discriminant(lambda_phi(3), "S") == (1 - 2 * z - z**2) * (1 - z**4)
    assert discriminant(lambda_phi(4), "S").degree("z") == 8
    with pytest.raises(ModelError):
        lambda_phi(1)


def test_saturated_elimination_reproduces_cubic():
    m = get_model("saturated")
    cubic = z**4 * S**3 + z**2 * (z**2 - 2) * S**2 + (1 - z**2) * S - z * (1 + z)
    assert (m.phi - cubic).is_zero() or (m.phi + cubic).is_zero()
    assert m.s0 == 0


def test_canonical_discriminant_contains_delta():
    m = get_model("canonical")
    delta = (
        z**10 - 4 * z**9 - 2 * z**8 + 6 * z**7 + 3 * z**6 - 8 * z**5
        - z**4 + 4 * z**3 - z**2 - 2 * z + 1
    )
    assert m.phi.degree("S") == 2
    ok, _ = exact_divides(delta, discriminant(m.phi, "S"))
    assert ok


def test_degenerate_system():
    eq = z + z * T + S * T - S
    with pytest.raises(DegenerateSystemError):
        eliminate_auxiliary(ModelSpec(name="deg", kind="system", eq1=eq, eq2=eq))


def test_locally_optimal_discriminant_is_P():
    P = (z**4 + 2 * z**3 + z**2 + z - 1) ** 2 - 4 * z**3 * (1 + z) ** 2
    m = get_model("locally-optimal")
    assert discriminant(m.phi, "S") == P
    assert m.published_radicand == P.as_unipoly()


def test_get_model_examples():
    pi = get_model("pi-shapes")
    assert pi.kind == "algebraic"
    assert pi.phi == z**2 * S**2 + (z**2 - 1) * S + z**2
    assert pi.s0 == 0
    l2 = get_model("lambda2")
    assert l2.kind == "recurrence" and l2.lam == 2 and l2.phi == lambda_phi(2) and l2.s0 == 1
    with pytest.raises(ModelLookupError, match="available"):
        get_model("nosuch")


@pytest.mark.parametrize("name", PRESETS)
def test_simple_root_at_origin(name):
    m = get_model(name)
    at0 = {"z": 0, "S": m.s0}
    assert poly_eval(m.phi, at0) == 0
    assert poly_eval(m.phi.derivative("S"), at0) != 0


@pytest.mark.parametrize("lam", [2, 3])
def test_published_lambda_radicands_exact(lam):
    m = get_model(f"lambda{lam}")
    assert discriminant(m.phi, "S").as_unipoly() == m.published_radicand


@pytest.mark.parametrize(
    "name",
    ["lambda2", "lambda3", "saturated", "canonical", "locally-optimal", "pi-shapes", "pi-shapes-compatible"],
)
def test_published_radicand_divides_discriminant(name):
    m = get_model(name)
    ok, _ = exact_divides(m.published_radicand, discriminant(m.phi, "S"))
    assert ok


def test_model_file_round_trip(tmp_path):
    for name in ("pi-shapes", "lambda3"):
        m = get_model(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(m.to_dict()))
        loaded = load_model_file(path)
        assert loaded.phi == m.phi and loaded.s0 == m.s0
        assert resolve_model(str(path)).name == name


def test_model_file_system(tmp_path):
    eq1 = z + z**2 + z * T + z**2 * T + z**2 * S + z**2 * S**2 - S
    eq2 = z**2 * S + z**2 * T * S - T
    spec = model_from_dict({"name": "sat2", "kind": "system", "eq1": eq1.to_json(), "eq2": eq2.to_json()})
    assert spec.phi == get_model("saturated").phi
    assert spec.s0 == 0


def test_model_file_errors():
    with pytest.raises(ModelError, match="kind"):
        model_from_dict({"name": "x"})
    with pytest.raises(ModelError, match="phi"):
        model_from_dict({"name": "x", "kind": "algebraic"})
    with pytest.raises(ModelError, match="lambda"):
        model_from_dict({"name": "x", "kind": "recurrence", "lambda": 1})
    # S(0) = 2 is not a root of phi(0, S) = S - 1
    bad = (S - 1 - z * S**2).to_json()
    with pytest.raises(BranchAmbiguityError):
        model_from_dict({"name": "x", "kind": "algebraic", "phi": bad, "s0": "2"})
    # phi(0, S) = S^2 has only a double root
    with pytest.raises(BranchAmbiguityError):
        model_from_dict({"name": "x", "kind": "algebraic", "phi": (S**2 - z).to_json()})


def test_model_file_s0_inferred():
    spec = model_from_dict({"name": "cat", "kind": "algebraic", "phi": (z * S**2 - S + 1).to_json()})
    assert spec.s0 == Fraction(1)
