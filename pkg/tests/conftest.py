import pytest
from hypothesis import strategies as st

from padicrec.sequence import BUILTINS, RecurrenceSpec


def naive_terms(a, b, c, init, count):
    """Plain forward unrolling; shares nothing with the matrix code."""
    xs = list(init)
    while len(xs) < count:
        xs.append(a * xs[-1] + b * xs[-2] + c * xs[-3])
    return xs[:count]


def brute_order(spec, M, cap=10**6):
    """Least N >= 1 with C^N = I mod M, by repeated multiplication."""
    C = spec.companion()
    P = [list(r) for r in C]
    for n in range(1, cap):
        if all(P[i][j] % M == (i == j) for i in range(3) for j in range(3)):
            return n
        P = [[sum(P[i][k] * C[k][j] for k in range(3)) % M for j in range(3)] for i in range(3)]
    raise AssertionError("order not found")


@st.composite
def specs(draw, unimodular=False):
    a = draw(st.integers(-5, 5))
    b = draw(st.integers(-5, 5))
    c = draw(st.sampled_from([-1, 1])) if unimodular else draw(st.integers(-5, 5).filter(bool))
    init = draw(st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)).filter(any))
    return RecurrenceSpec(a, b, c, *init)


@pytest.fixture(params=sorted(BUILTINS))
def builtin(request):
    return BUILTINS[request.param]
