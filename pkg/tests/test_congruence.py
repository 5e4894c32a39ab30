from itertools import product

import pytest
from hypothesis import given, strategies as st

from collatz_census.congruence import (
    build_number,
    decompose,
    format_tuple,
    is_primary_solution,
    parse_tuple,
    rhs_terms,
    verify_inverse,
)
from collatz_census.syracuse import UnresolvedError, level

from oracles import brute_B, brute_valuations


@pytest.mark.parametrize("v, expected", [((4,), True), ((6,), False), ((4, 3), True), ((2,), True), ((3,), False)])
def test_is_primary_solution_examples(v, expected):
    assert is_primary_solution(v) is expected
    assert is_primary_solution(v, exact=True) is expected


def test_exact_and_modular_paths_agree():
    for l in (1, 2, 3):
        for v in product(range(1, 13), repeat=l):
            assert is_primary_solution(v) == is_primary_solution(v, exact=True), v


@given(st.lists(st.integers(min_value=1, max_value=60), min_size=1, max_size=12))
def test_exact_and_modular_paths_agree_random(v):
    d = brute_B(v)
    expected = d % 3 ** len(v) == 0 and d % 3 ** (len(v) + 1) != 0
    assert is_primary_solution(v) == is_primary_solution(v, exact=True) == expected


def test_rhs_sum_last_term_is_power_of_three():
    v = (8, 6, 7)
    lhs, rhs = rhs_terms(v)
    assert lhs == 2**21
    assert rhs == 2 ** (6 + 7) + 3 * 2**7 + 9


@pytest.mark.parametrize("v, n", [((4,), 5), ((4, 3), 13), ((8, 6), 1813)])
def test_build_number_examples(v, n):
    r = build_number(v)
    assert r.n == n
    assert 3 ** len(v) * r.n == r.exact_power - r.rhs_sum
    assert brute_B(v) == 3 ** len(v) * n


def test_build_number_1813_has_level_2():
    assert level(1813).l == 2


def test_build_rejects_non_solution():
    with pytest.raises(ValueError):
        build_number((6,))


@pytest.mark.parametrize("n, v", [(5, (4,)), (13, (4, 3)), (1813, (8, 6))])
def test_decompose_examples(n, v):
    assert decompose(n) == v


@pytest.mark.parametrize("n", [1, 21, 9, 4])
def test_decompose_rejects(n):
    with pytest.raises(ValueError):
        decompose(n)


def test_decompose_unresolved():
    with pytest.raises(UnresolvedError):
        decompose(7, cap=3)


@pytest.mark.parametrize("v", [(4,), (4, 3), (8, 6)])
def test_verify_inverse_examples(v):
    assert verify_inverse(v)


def test_verify_inverse_unresolved_is_distinct():
    v = decompose(31)
    with pytest.raises(UnresolvedError):
        verify_inverse(v, cap=len(v) - 1)


def test_round_trip_A_and_B():
    for n in range(5, 20001, 2):
        if n % 3 == 0:
            continue
        v = decompose(n)
        assert list(reversed(v)) == brute_valuations(n)
        assert v[0] > 2 and v[0] % 2 == 0
        assert build_number(v).n == n
        assert decompose(build_number(v).n) == v


def test_injectivity_exhaustive_small():
    # every solution tuple with v_1 > 2, l <= 3, sum <= 30
    seen = {}
    for l in (1, 2, 3):
        for v in product(range(1, 29), repeat=l):
            if sum(v) > 30 or v[0] <= 2 or not is_primary_solution(v):
                continue
            n = build_number(v).n
            assert n not in seen, (v, seen.get(n))
            seen[n] = v
            assert verify_inverse(v)
            assert n * 3**l <= 2 ** sum(v)
    assert len(seen) > 50


def test_tuple_text_form():
    assert parse_tuple("4,3") == (4, 3)
    assert format_tuple((8, 6)) == "8,6"
    with pytest.raises(ValueError):
        parse_tuple("4,,3")
