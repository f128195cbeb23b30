from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicrec.errors import DomainError, NotAUnit, PrecisionExhausted
from padicrec.padic import (
    PadicApprox,
    exp_small,
    factorial_valuation_exact,
    inv_mod,
    log_unit,
    valuation,
)


def test_valuation():
    assert valuation(24736, 2) == 5
    assert valuation(70032, 2) == 4
    assert valuation(Fraction(9, 8), 2) == -3
    assert valuation(0, 5) == float("inf")


def test_inverse():
    assert inv_mod(14, 27) == 2
    assert inv_mod(3, 25) == 17
    with pytest.raises(NotAUnit):
        inv_mod(6, 27)


def test_log_exp_small_values():
    assert log_unit(PadicApprox(3, 3, 4)).r == 21
    assert exp_small(PadicApprox(3, 3, 3)).r == 13
    with pytest.raises(DomainError):
        log_unit(PadicApprox(3, 3, 2))
    with pytest.raises(DomainError):
        log_unit(PadicApprox(2, 5, 3))  # needs 1 mod 4
    with pytest.raises(DomainError):
        exp_small(PadicApprox(2, 5, 2))


def test_log_additive():
    p, K = 5, 10
    a, b = PadicApprox(p, K, 6), PadicApprox(p, K, 11)
    assert log_unit(a * b) == log_unit(a) + log_unit(b)


def test_precision_tracking():
    x = PadicApprox(2, 8, 4) * PadicApprox(2, 8, 3)
    assert x.K == 8
    y = PadicApprox(2, 8, 4) * PadicApprox(2, 5, 8)
    assert y.K == 7
    with pytest.raises(PrecisionExhausted):
        PadicApprox(2, 4, 1).with_precision(6)


def test_factorial_valuation_exact():
    assert factorial_valuation_exact(10, 2) == 8
    assert factorial_valuation_exact(6, 3) == 2
    assert factorial_valuation_exact(1, 7) == 0


primes = st.sampled_from([2, 3, 5, 7, 11, 13])


@given(p=primes, K=st.integers(2, 20), data=st.data())
@settings(max_examples=150, deadline=None)
def test_exp_log_round_trip(p, K, data):
    need = 2 if p == 2 else 1
    t = data.draw(st.integers(0, p ** (K - need) - 1)) * p**need
    z = PadicApprox(p, K, 1 + t)
    assert exp_small(log_unit(z)) == z
    w = PadicApprox(p, K, t)
    assert log_unit(exp_small(w)) == w
