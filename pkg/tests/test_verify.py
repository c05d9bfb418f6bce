from fractions import Fraction

import pytest

from gosper_karaji.errors import DomainError
from gosper_karaji.expr import K
from gosper_karaji.lsum import build_prefix_pair, generate_identity, identity_family
from gosper_karaji.parser import parse_term
from gosper_karaji.sequences import derangement
from gosper_karaji.verify import (
    ArraySpec,
    OracleVerdict,
    check_identity,
    check_range,
    multiplier_telescopes,
    oracle_lsum2d,
    oracle_lsum3d,
    oracle_special_1d,
    oracle_special_2d,
    random_grid_trials,
    special_2d_as_derived,
    table_bridge,
    zeta_identity,
)


def test_product_tables():
    v = oracle_lsum2d(ArraySpec.product(K), 2)
    assert v.equal and v.side_a == 9
    v = oracle_lsum3d(ArraySpec.product(K, 3), 2)
    assert v.equal and v.side_a == 27


@pytest.mark.parametrize("n", range(1, 9))
def test_product_table_totals(n):
    # sum_{i,j} i j = (n(n+1)/2)^2, computed here without the oracle
    tri = n * (n + 1) // 2
    assert oracle_lsum2d(ArraySpec.product(K), n).side_b == tri**2
    assert oracle_lsum3d(ArraySpec.product(K, 3), n).side_b == tri**3


def test_zero_indexed_grid():
    grid = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    v = oracle_lsum2d(ArraySpec.grid(grid, lower=0), 2)
    assert v.equal and v.side_a == 45


def test_nonsymmetric_function_array():
    A = ArraySpec(2, lambda i, j: Fraction(i, j + 7) + i * i * j, 1)
    assert all(oracle_lsum2d(A, n).equal for n in range(1, 10))
    B = ArraySpec(3, lambda i, j, k: Fraction(i - 2 * j, k + 1) + i * k, 0)
    assert all(oracle_lsum3d(B, n).equal for n in range(0, 6))


def test_bad_arrays():
    with pytest.raises(ValueError):
        ArraySpec(4, lambda *a: 0)
    with pytest.raises(ValueError):
        ArraySpec(2, lambda *a: 0, lower=2)
    with pytest.raises(ValueError):
        oracle_lsum3d(ArraySpec.product(K), 3)


def test_special_1d_derangement():
    v = oracle_special_1d(derangement, 3, lower=1)
    assert v.equal and v.side_a == 9 and v.side_b == 9
    # zero-indexed: D = (1, 0, 1, 2) sums to 4 over four indices
    v = oracle_special_1d(derangement, 3, lower=0)
    assert v.equal and v.side_b == 16


@pytest.mark.parametrize("lower", [0, 1])
def test_special_1d_holds(lower):
    for text in ("k^2", "pow(2,k)", "1/(k+1)"):
        t = parse_term(text)
        assert all(oracle_special_1d(t, n, lower).equal for n in range(lower, 15))


def test_special_2d_readings():
    one = lambda i, j: Fraction(1)
    v = oracle_special_2d(one, 1)
    assert not v.as_printed.equal
    assert (v.as_printed.side_a, v.as_printed.side_b) == (6, 8)
    assert v.as_derived.equal
    for f in (one, lambda i, j: Fraction(i * 3 - j, j + 2)):
        for n in range(0, 6):
            assert oracle_special_2d(f, n).as_derived.equal
            assert special_2d_as_derived(f, n).equal


def test_random_grids_small():
    assert random_grid_trials(20, 5).all_equal
    assert random_grid_trials(5, 4, dimension=3).all_equal
    a = random_grid_trials(3, 4, seed=1)
    assert a.to_json()["seed"] == 1


def test_check_identity_and_range():
    [(raw, pres)] = identity_family(K, [2])
    assert check_identity(raw, 10).equal
    assert check_identity(pres, 10).equal
    summary = check_range(pres, 60)
    assert summary.all_equal and summary.checked == 60
    with pytest.raises(DomainError):
        check_identity(raw, 0)


def test_range_detects_mutation():
    # 2 s t - t^2 turned into 2 s t + t^2
    raw = generate_identity(build_prefix_pair(K), 2)
    bad = raw.with_monomials((c if b == 1 else -c, a, b) for c, a, b in raw.monomials)
    summary = check_range(bad, 50)
    assert not summary.all_equal
    assert summary.first_failure.n == 1
    assert summary.checked == 1


def test_range_agrees_with_scratch_sums():
    [(raw, _)] = identity_family(parse_term("1/k"), [3])
    for n in (1, 5, 17):
        assert check_identity(raw, n) == OracleVerdict.of(
            sum(raw.summand_at(k) for k in range(1, n + 1)), raw.rhs_at(n), n)


@pytest.mark.parametrize("t", ["k", "1", "1/k", "pow(2,k)"])
def test_table_bridge(t):
    for raw, _ in identity_family(parse_term(t), [2, 3]):
        for n in range(1, 8):
            assert table_bridge(raw, n).equal
    with pytest.raises(ValueError):
        table_bridge(identity_family(K, [4])[0][0], 3)


def test_zeta_identity():
    v = zeta_identity(2, 2)
    assert v.equal and v.side_a == Fraction(21, 16)
    assert all(zeta_identity(s, n).equal for s in (2, 3, 4) for n in range(1, 20))


def test_multiplier_telescopes():
    pair = build_prefix_pair(parse_term("1/k"))
    assert all(multiplier_telescopes(pair, m, k) for m in range(1, 7) for k in range(1, 12))
