from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.functions.combinatorial.numbers import stirling

from padicrec.errors import DomainError, HenselFails
from padicrec.padic import valuation
from padicrec.sequence import MTRIPELL, TRIPELL, admissible_prime, period, term_mod
from padicrec.series import (
    f_series,
    find_zeros,
    hensel_start,
    hensel_zero,
    log_power_coefficients,
    newton_count,
    no_zero_certificate,
)


@pytest.mark.parametrize("k", range(0, 7))
def test_log_power_coefficients_are_stirling(k):
    J = 12
    got = log_power_coefficients(k, J)
    for j in range(J + 1):
        want = Fraction(stirling(j, k, kind=1, signed=True), factorial(j)) if j >= k else 0
        assert got[j] == want


def test_mtripell_coefficients_k4():
    s0 = f_series(MTRIPELL, 2, 0, K=4)
    assert s0.N == 6 and s0.norm == 2
    assert s0.coeffs[0].r == 0 and s0.coeffs[1].r == 2
    s5 = f_series(MTRIPELL, 2, 5, K=4)
    assert s5.coeffs[1].r == 4
    sm1 = f_series(MTRIPELL, 2, -1, K=4)
    assert [c.r for c in sm1.coeffs[:3]] == [0, 4, 8]


@pytest.mark.parametrize("spec,p,ell", [
    (MTRIPELL, 2, 0), (MTRIPELL, 2, 5), (MTRIPELL, 2, 2), (TRIPELL, 7, 6),
    (TRIPELL, 5, 8), (TRIPELL, 103, 0), (MTRIPELL, 5, 3),
])
def test_series_interpolates_the_sequence(spec, p, ell):
    K = 8
    s = f_series(spec, p, ell, K=K)
    scale = p**s.norm
    for m in range(0, 25):
        x = term_mod(spec, ell + m * s.N, p ** (K + s.norm))
        assert x % scale == 0
        assert s.evaluate(m).r == (x // scale) % p**K


def test_tail_floor_bounds_coefficients():
    s = f_series(MTRIPELL, 2, 0, K=12)
    for k, c in enumerate(s.coeffs):
        assert c.lower_valuation() >= min(s.tail_floor(k), s.K)


def test_wrong_step_rejected():
    with pytest.raises(DomainError):
        f_series(MTRIPELL, 2, 0, N=5)


def test_newton_and_hensel_mtripell():
    s = f_series(MTRIPELL, 2, 0, K=8)
    count = newton_count(s)
    assert count.mu == 1 and count.exact
    z = hensel_zero(s, hensel_start(s))
    assert z.b.r == 0
    s5 = f_series(MTRIPELL, 2, 5, K=8)
    assert newton_count(s5).content == 2
    z5 = hensel_zero(s5, hensel_start(s5))
    assert z5.b == -1  # 5 + 6 * (-1) = -1 is the integral zero
    with pytest.raises(HenselFails):
        hensel_zero(s5, 0)


def test_constant_class():
    s = f_series(MTRIPELL, 2, 2, K=8)
    assert newton_count(s).mu == 0
    assert find_zeros(s) == []
    assert no_zero_certificate(MTRIPELL, 2, 2)
    assert not no_zero_certificate(MTRIPELL, 2, 0)


def _simple_zero_classes():
    out = []
    for spec in (TRIPELL, MTRIPELL):
        for p in (5, 7, 11, 13, 17, 19, 23, 31, 37, 43, 47, 53, 59, 61, 67):
            if not admissible_prime(spec, p):
                continue
            N = period(spec, p)
            for ell in range(N):
                x = term_mod(spec, ell, p * p)
                y = term_mod(spec, ell + N, p * p)
                if x % p == 0 and (y - x) % (p * p):
                    out.append((spec, p, ell))
    return out


SIMPLE = _simple_zero_classes()


def test_enough_hensel_cases():
    assert len(SIMPLE) >= 100


@given(case=st.sampled_from(SIMPLE), K=st.integers(4, 10))
@settings(max_examples=120, deadline=None)
def test_hensel_residual(case, K):
    spec, p, ell = case
    s = f_series(spec, p, ell, K=K)
    z = hensel_zero(s, hensel_start(s))
    assert z.residual_valuation >= K - 2
    # independent check: x at ell + N b is divisible to the same depth
    b = z.b.r
    assert valuation(term_mod(spec, ell + s.N * b, p ** (K + 1)) or p ** (K + 1), p) >= K - 2
