from itertools import combinations

import pytest

from rnagrowth.coeffs import (
    CountSequence,
    implicit_series,
    is_secondary_structure,
    model_counts,
    oracle_count,
    oracle_wc_count,
    phi_on_series,
    recurrence_counts,
    unrestricted_primary,
    wc_primary_counts,
)
from rnagrowth.errors import BranchAmbiguityError, ModelInconsistencyError, ResourceLimitError
from rnagrowth.models import ModelSpec, get_model
from rnagrowth.polynomial import S, z
from rnagrowth.series import PowerSeries


def brute_adjacency_count(n, lam):
    """Count arc subsets whose adjacency matrix satisfies the three axioms."""
    arcs = [(i, j) for i in range(n) for j in range(i + lam, n)]
    total = 0
    for k in range(len(arcs) + 1):
        for chosen in combinations(arcs, k):
            adj = [[0] * n for _ in range(n)]
            for i in range(n - 1):
                adj[i][i + 1] = adj[i + 1][i] = 1
            for i, j in chosen:
                adj[i][j] = adj[j][i] = 1
            total += is_secondary_structure(adj)
    return total


@pytest.mark.parametrize("lam", [2, 3])
def test_oracle_agrees_with_axiom_checker(lam):
    for n in range(8):
        assert oracle_count(n, lam) == brute_adjacency_count(n, lam)


def test_axiom_checker_rejects_crossing_and_double_pairing():
    n = 6
    adj = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        adj[i][i + 1] = adj[i + 1][i] = 1
    adj[0][3] = adj[3][0] = 1
    adj[2][5] = adj[5][2] = 1
    assert not is_secondary_structure(adj)
    adj[2][5] = adj[5][2] = 0
    adj[0][5] = adj[5][0] = 1
    assert not is_secondary_structure(adj)


def test_recurrence_examples(lambda2_counts):
    assert list(recurrence_counts(2, 7).values) == lambda2_counts
    assert [oracle_count(n, 2) for n in range(8)] == lambda2_counts
    assert recurrence_counts(3, 4)[4] == 2
    assert recurrence_counts(4, 4).values == (1,) * 5
    with pytest.raises(Exception):
        recurrence_counts(1, 5)


def test_oracle_examples():
    assert oracle_count(2, 2) == 1
    assert oracle_count(3, 2) == 2
    assert oracle_count(6, 2) == 17
    assert oracle_count(0, 2) == 1
    with pytest.raises(ResourceLimitError):
        oracle_count(15, 2)
    assert oracle_count(15, 2, cap=15) == recurrence_counts(2, 15)[15]


def test_wc_primary():
    seq = wc_primary_counts(8)
    assert seq[1] == 4 and seq[2] == 6 and seq[3] == 10
    assert list(seq.values[1:]) == [oracle_wc_count(n) for n in range(1, 9)]
    assert all(seq[n] <= unrestricted_primary(n) for n in range(1, 9))
    assert unrestricted_primary(1) == 4
    assert unrestricted_primary(10) == 1048576
    assert list(model_counts(get_model("primary-wc"), 8).values) == list(seq.values)


def test_primary_free_series():
    s = implicit_series(get_model("primary-free"), 10)
    assert [int(c) for c in s] == [4**n for n in range(11)]


def test_implicit_series_lambda2(lambda2_counts):
    s = implicit_series(get_model("lambda2"), 7)
    assert [int(c) for c in s] == lambda2_counts


def pi_shapes_by_substitution(order):
    # S = z^2 (1 + S + S^2), iterated on integer lists; each round fixes two more terms
    s = [0] * (order + 1)
    for _ in range(order):
        sq = [sum(s[i] * s[k - i] for i in range(k + 1)) for k in range(order + 1)]
        inner = [(1 if k == 0 else 0) + s[k] + sq[k] for k in range(order + 1)]
        s = [0, 0] + inner[: order - 1]
    return s


def test_implicit_series_pi_shapes():
    expected = pi_shapes_by_substitution(8)
    assert expected == [0, 0, 1, 0, 1, 0, 2, 0, 4]
    assert [int(c) for c in implicit_series(get_model("pi-shapes"), 8)] == expected
    assert [int(c) for c in implicit_series(get_model("pi-shapes"), 30)] == pi_shapes_by_substitution(30)


def test_implicit_series_trivial():
    m = ModelSpec(name="id", kind="algebraic", phi=S - z, s0=0, counting=False)
    assert implicit_series(m, 4) == PowerSeries([0, 1, 0, 0, 0])


def test_implicit_series_errors():
    m = ModelSpec(name="bad", kind="algebraic", phi=S**2 - z, s0=0)
    with pytest.raises(BranchAmbiguityError):
        implicit_series(m, 4)
    # S = z/2 is fine as algebra but not a counting sequence
    m = ModelSpec(name="half", kind="algebraic", phi=2 * S - z, s0=0, counting=True)
    with pytest.raises(ModelInconsistencyError):
        implicit_series(m, 3)


@pytest.mark.parametrize("lam", [2, 3, 4])
def test_three_way_agreement(lam):
    n = 12
    rec = recurrence_counts(lam, n).values
    ser = tuple(int(c) for c in implicit_series(get_model(f"lambda{lam}"), n))
    brute = tuple(oracle_count(k, lam) for k in range(n + 1))
    assert rec == ser == brute


def test_residual_and_monotone():
    m = get_model("saturated")
    s = implicit_series(m, 40)
    assert all(c == 0 for c in phi_on_series(m.phi, s))
    vals = recurrence_counts(2, 60).values
    assert all(a <= b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("name", ["saturated", "canonical"])
def test_counting_series_integral_to_60(name):
    s = implicit_series(get_model(name), 60)
    assert all(c.denominator == 1 and c >= 0 for c in s)


def _mul(a, b):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(len(a))]


def _shift(a, k):
    return ([0] * k + a)[: len(a)]


def system_fixed_point(order, step):
    """Iterate (S, T) <- step(S, T) on integer lists until stable."""
    s, t = [0] * (order + 1), [0] * (order + 1)
    for _ in range(order + 2):
        s, t = step(s, t)
    return s


def saturated_step(s, t):
    n = len(s)
    one = [1] + [0] * (n - 1)
    # S = z + z^2 + zT + z^2 T + z^2 S + z^2 S^2 ;  T = z^2 S + z^2 T S
    new_s = [a + b + c + d + e + f for a, b, c, d, e, f in zip(
        _shift(one, 1), _shift(one, 2), _shift(t, 1), _shift(t, 2), _shift(s, 2), _shift(_mul(s, s), 2))]
    new_t = [a + b for a, b in zip(_shift(s, 2), _shift(_mul(t, s), 2))]
    return new_s, new_t


def canonical_step(s, q):
    n = len(s)
    one = [1] + [0] * (n - 1)
    # S = z + zS + z^2 Q + z^2 S Q ;  Q = z^3 + z^2 Q + z^4 S Q + z^3 S
    new_s = [a + b + c + d for a, b, c, d in zip(
        _shift(one, 1), _shift(s, 1), _shift(q, 2), _shift(_mul(s, q), 2))]
    new_q = [a + b + c + d for a, b, c, d in zip(
        _shift(one, 3), _shift(q, 2), _shift(_mul(s, q), 4), _shift(s, 3))]
    return new_s, new_q


@pytest.mark.parametrize("name, step", [("saturated", saturated_step), ("canonical", canonical_step)])
def test_eliminated_equation_matches_original_system(name, step):
    order = 30
    expected = system_fixed_point(order, step)
    assert [int(c) for c in implicit_series(get_model(name), order)] == expected


def test_count_sequence_json():
    seq = recurrence_counts(2, 60)
    data = seq.to_json()
    assert data["n_max"] == 60 and data["values"][7] == "37"
    assert CountSequence.from_json(data) == seq
    assert int(data["values"][60]) > 2**63
