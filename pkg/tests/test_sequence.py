import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicrec.errors import DegenerateCharPoly, InadmissiblePrime, NonIntegralTerm, ValidationError
from padicrec.sequence import (
    MTRIPELL,
    TRIBONACCI,
    TRIPELL,
    RecurrenceSpec,
    admissible_prime,
    char_data,
    discriminant,
    finite_difference,
    period,
    period_table,
    residue_array,
    state_cycle_length,
    term,
    term_mod,
    terms,
)

from conftest import brute_order, naive_terms, specs


def test_known_terms():
    assert term(MTRIPELL, 5) == 48
    assert term(MTRIPELL, 11) == 24736
    assert term(MTRIPELL, 12) == 70032
    assert term(TRIPELL, -1) == 0
    assert term(TRIBONACCI, -4) == 0
    assert term(TRIBONACCI, -17) == 0
    assert term(TRIPELL, 0) == 0


def test_terms_match_naive_unrolling(builtin):
    assert terms(builtin, 0, 60) == naive_terms(builtin.a, builtin.b, builtin.c, builtin.initial, 60)


def test_negative_terms_nonunimodular():
    spec = RecurrenceSpec(1, 1, 2, 1, 1, 1)
    with pytest.raises(NonIntegralTerm):
        term(spec, -5)
    v = term(spec, -5, integral=False)
    # run forward again from the rational backward values
    back = [term(spec, n, integral=False) for n in (-5, -4, -3)]
    assert naive_terms(1, 1, 2, back, 8)[5:] == [1, 1, 1]
    assert v == back[0]


def test_validation():
    with pytest.raises(ValidationError):
        RecurrenceSpec(1, 1, 0, 0, 1, 1)
    with pytest.raises(ValidationError):
        RecurrenceSpec(1, 1, 1, 0, 0, 0)
    with pytest.raises(DegenerateCharPoly):
        char_data(RecurrenceSpec(3, -3, 1, 0, 1, 2))  # (x - 1)^3


def test_discriminants():
    assert discriminant(1, 1, 1) == -44
    assert discriminant(2, 1, 1) == -87
    assert discriminant(2, 2, 1) == -83
    assert not admissible_prime(TRIPELL, 29)
    assert not admissible_prime(MTRIPELL, 83)
    assert admissible_prime(TRIPELL, 7)


def test_char_data_q_polynomial():
    cd = char_data(TRIPELL)
    assert cd.p_coeffs == (1, -2, -1, -1)
    assert cd.q_coeffs == (0, 1, 0)


def test_periods():
    assert period(MTRIPELL, 2, 2) == 6
    assert [period(MTRIPELL, 2, k) for k in (1, 2, 3, 4)] == [3, 6, 6, 12]
    assert 6 % period(MTRIPELL, 2, 1) == 0
    # p = 2 divides the Tribonacci discriminant; the state cycle is still 4
    with pytest.raises(InadmissiblePrime):
        period(TRIBONACCI, 2, 1)
    assert state_cycle_length(TRIBONACCI, 2) == 4


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_period_matches_brute_order(p):
    for spec in (TRIPELL, MTRIPELL):
        if admissible_prime(spec, p):
            assert period(spec, p, 1) == brute_order(spec, p)
            assert period(spec, p, 2) == brute_order(spec, p * p)


def test_period_table_entries():
    table = period_table(TRIPELL, 7, 3)
    assert [table[k] for k in (1, 2, 3)] == [57, 57 * 7, 57 * 49]


@given(spec=specs(), n=st.integers(0, 300), M=st.integers(2, 10**6))
@settings(max_examples=150, deadline=None)
def test_term_mod_agrees_with_term(spec, n, M):
    assert term_mod(spec, n, M) == term(spec, n) % M


@given(spec=specs(unimodular=True), n=st.integers(-60, -1), M=st.integers(2, 10**4))
@settings(max_examples=100, deadline=None)
def test_negative_term_mod(spec, n, M):
    assert term_mod(spec, n, M) == term(spec, n) % M


@given(spec=specs(), n=st.integers(0, 200))
@settings(max_examples=150, deadline=None)
def test_recurrence_identity(spec, n):
    x = terms(spec, n, n + 4)
    assert x[3] == spec.a * x[2] + spec.b * x[1] + spec.c * x[0]


@given(start=st.integers(0, 50), count=st.integers(1, 9000), shift=st.integers(0, 40),
       M=st.sampled_from([4, 8, 49, 103, 1009]))
@settings(max_examples=30, deadline=None)
def test_residue_array_matches_term_mod(start, count, shift, M):
    got = []
    for offset, values in residue_array(TRIPELL, start, count, M, shift=shift, block=512):
        assert offset == len(got)
        got.extend(values.tolist())
    assert len(got) == count
    for i in (0, count // 2, count - 1):
        assert got[i] == term_mod(TRIPELL, start + i + shift, M)


def test_finite_difference():
    x = terms(MTRIPELL, 0, 20)
    assert finite_difference(MTRIPELL, 0, 6, 2, 10**9) == (x[12] - 2 * x[6] + x[0]) % 10**9
    assert finite_difference(MTRIPELL, 3, 6, 0, 1000) == x[3] % 1000
