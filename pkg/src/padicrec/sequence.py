"""Exact and modular evaluation of third-order integer recurrences.

A sequence is fixed by ``x_n = a*x_{n-1} + b*x_{n-2} + c*x_{n-3}`` and its
three initial values.  States are the triples ``(x_n, x_{n+1}, x_{n+2})``
and advance by the companion matrix::

    [[0, 1, 0],
     [0, 0, 1],
     [c, b, a]]

whose characteristic polynomial is ``P(x) = x^3 - a x^2 - b x - c``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

import numpy as np
import sympy

from .errors import (
    DegenerateCharPoly,
    InadmissiblePrime,
    NonIntegralTerm,
    ResourceError,
    ValidationError,
)

CYCLE_CAP = 10**8

Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]
IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class RecurrenceSpec:
    a: int
    b: int
    c: int
    x0: int
    x1: int
    x2: int
    name: str | None = None

    def __post_init__(self):
        if self.c == 0:
            raise ValidationError("c must be non-zero")
        if self.x0 == 0 and self.x1 == 0 and self.x2 == 0:
            raise ValidationError("initial values must not all be zero")

    @property
    def initial(self) -> tuple[int, int, int]:
        return (self.x0, self.x1, self.x2)

    @property
    def unimodular(self) -> bool:
        """True when |c| = 1, i.e. every backward term is an integer."""
        return abs(self.c) == 1

    def companion(self) -> Matrix:
        return ((0, 1, 0), (0, 0, 1), (self.c, self.b, self.a))

    def label(self) -> str:
        return self.name or f"({self.a},{self.b},{self.c};{self.x0},{self.x1},{self.x2})"


TRIBONACCI = RecurrenceSpec(1, 1, 1, 0, 1, 1, name="tribonacci")
TRIPELL = RecurrenceSpec(2, 1, 1, 0, 1, 2, name="tripell")
MTRIPELL = RecurrenceSpec(2, 2, 1, 0, 1, 2, name="mtripell")

BUILTINS = {s.name: s for s in (TRIBONACCI, TRIPELL, MTRIPELL)}


@dataclass(frozen=True)
class CharPolyData:
    """Integer data of the characteristic polynomial.

    ``p_coeffs`` and ``q_coeffs`` are listed from the leading coefficient
    down, so ``q_coeffs = (x0, x1 - a*x0, x2 - a*x1 - b*x0)``.
    """

    p_coeffs: tuple[int, int, int, int]
    q_coeffs: tuple[int, int, int]
    discriminant: int

    def P(self, x):
        _, u, v, w = self.p_coeffs
        return ((x + u) * x + v) * x + w

    def dP(self, x):
        _, u, v, _ = self.p_coeffs
        return (3 * x + 2 * u) * x + v

    def q(self, x):
        u, v, w = self.q_coeffs
        return (u * x + v) * x + w


@dataclass(frozen=True)
class PeriodTable:
    p: int
    entries: tuple[tuple[int, int], ...]

    def __getitem__(self, k: int) -> int:
        for level, n in self.entries:
            if level == k:
                return n
        raise KeyError(k)


# -- matrix helpers ---------------------------------------------------------


def mat_mul(A: Matrix, B: Matrix, mod: int | None = None) -> Matrix:
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            v = A[i][0] * B[0][j] + A[i][1] * B[1][j] + A[i][2] * B[2][j]
            row.append(v % mod if mod else v)
        rows.append(tuple(row))
    return tuple(rows)


def mat_pow(A: Matrix, e: int, mod: int | None = None) -> Matrix:
    if e < 0:
        raise ValueError("negative exponent")
    result = IDENTITY
    base = tuple(tuple(v % mod for v in row) for row in A) if mod else A
    while e:
        if e & 1:
            result = mat_mul(result, base, mod)
        e >>= 1
        if e:
            base = mat_mul(base, base, mod)
    return result


def mat_vec(A: Matrix, v, mod: int | None = None) -> tuple[int, int, int]:
    out = tuple(A[i][0] * v[0] + A[i][1] * v[1] + A[i][2] * v[2] for i in range(3))
    return tuple(x % mod for x in out) if mod else out


def _is_identity(A: Matrix, mod: int) -> bool:
    return all((A[i][j] - (i == j)) % mod == 0 for i in range(3) for j in range(3))


def _inverse_companion_mod(spec: RecurrenceSpec, M: int) -> Matrix:
    ci = pow(spec.c, -1, M)
    # state_{n-1} = (x_{n-1}, x_n, x_{n+1}) with x_{n-1} = (x_{n+2} - a x_{n+1} - b x_n) / c
    return (
        ((-spec.b * ci) % M, (-spec.a * ci) % M, ci % M),
        (1, 0, 0),
        (0, 1, 0),
    )


# -- terms -------------------------------------------------------------------


def _backward(spec: RecurrenceSpec, n: int) -> Fraction:
    hi, mid, lo = Fraction(spec.x2), Fraction(spec.x1), Fraction(spec.x0)
    for _ in range(-n):
        prev = (hi - spec.a * mid - spec.b * lo) / spec.c
        hi, mid, lo = mid, lo, prev
    return lo


def term(spec: RecurrenceSpec, n: int, integral: bool = True):
    """Exact value of ``x_n`` for any integer ``n``.

    Negative indices run the recurrence backwards over the rationals.  With
    ``integral=True`` a non-integer result raises :class:`NonIntegralTerm`;
    otherwise a :class:`~fractions.Fraction` is returned for it.
    """
    if 0 <= n < 3:
        return spec.initial[n]
    if n >= 3:
        return mat_vec(mat_pow(spec.companion(), n), spec.initial)[0]
    value = _backward(spec, n)
    if value.denominator == 1:
        return int(value)
    if integral:
        raise NonIntegralTerm(f"x_{n} = {value} is not an integer")
    return value


def terms(spec: RecurrenceSpec, start: int, stop: int, integral: bool = True) -> list:
    """Exact values ``[x_start, ..., x_{stop-1}]``."""
    if stop <= start:
        return []
    first = [term(spec, start + i, integral) for i in range(min(3, stop - start))]
    out = list(first)
    a, b, c = spec.a, spec.b, spec.c
    while len(out) < stop - start:
        out.append(a * out[-1] + b * out[-2] + c * out[-3])
    return out


def term_mod(spec: RecurrenceSpec, n: int, M: int) -> int:
    """``x_n mod M`` in O(log n) matrix steps.

    Negative ``n`` is accepted when ``c`` is invertible mod ``M``.
    """
    if M < 1:
        raise ValueError("modulus must be positive")
    if n >= 0:
        return mat_vec(mat_pow(spec.companion(), n, M), spec.initial, M)[0]
    if gcd(spec.c, M) != 1:
        value = term(spec, n)
        return value % M
    inv = _inverse_companion_mod(spec, M)
    return mat_vec(mat_pow(inv, -n, M), spec.initial, M)[0]


def state_mod(spec: RecurrenceSpec, n: int, M: int) -> tuple[int, int, int]:
    """``(x_n, x_{n+1}, x_{n+2}) mod M``."""
    if n >= 0:
        return mat_vec(mat_pow(spec.companion(), n, M), spec.initial, M)
    inv = _inverse_companion_mod(spec, M)
    return mat_vec(mat_pow(inv, -n, M), spec.initial, M)


def residue_array(spec: RecurrenceSpec, start: int, count: int, M: int,
                  shift: int = 0, block: int = 4096):
    """Yield ``(offset, values)`` chunks with ``values[i] = x_{start+offset+i+shift} mod M``.

    Terms are produced block-wise: block start states advance by ``C^block``
    and each block is expanded with one integer matrix product, so no
    per-term Python work is done.  Requires ``3*M**2 < 2**63``.
    """
    if 3 * M * M >= 2**63:
        raise ValueError("modulus too large for int64 block evaluation")
    if count <= 0:
        return
    C = spec.companion()
    block = max(3, min(block, count))
    # coefficient rows: x_{t+shift+i} = rows[i] . state_t
    rows = np.empty((block, 3), dtype=np.int64)
    jump = mat_pow(C, shift, M) if shift >= 0 else mat_pow(_inverse_companion_mod(spec, M), -shift, M)
    power = jump
    for i in range(block):
        rows[i] = power[0]
        power = mat_mul(C, power, M)
    rows_t = rows.T.copy()
    step = mat_pow(C, block, M)
    state = state_mod(spec, start, M)
    chunk_blocks = max(1, (1 << 20) // block)
    done = 0
    while done < count:
        nblocks = min(chunk_blocks, -(-(count - done) // block))
        states = np.empty((nblocks, 3), dtype=np.int64)
        for j in range(nblocks):
            states[j] = state
            state = mat_vec(step, state, M)
        values = (states @ rows_t) % M
        values = values.reshape(-1)[: count - done]
        yield done, values
        done += values.size


# -- characteristic polynomial -----------------------------------------------


def discriminant(a: int, b: int, c: int) -> int:
    """Discriminant of ``x^3 - a x^2 - b x - c``."""
    return -18 * a * b * c - 4 * a**3 * c + a * a * b * b + 4 * b**3 - 27 * c * c


def char_data(spec: RecurrenceSpec) -> CharPolyData:
    a, b, c = spec.a, spec.b, spec.c
    x0, x1, x2 = spec.initial
    disc = discriminant(a, b, c)
    if disc == 0:
        raise DegenerateCharPoly(f"characteristic polynomial of {spec.label()} has a repeated root")
    return CharPolyData(
        p_coeffs=(1, -a, -b, -c),
        q_coeffs=(x0, x1 - x0 * a, x2 - x1 * a - x0 * b),
        discriminant=disc,
    )


def admissible_prime(spec: RecurrenceSpec, p: int) -> bool:
    return spec.c % p != 0 and char_data(spec).discriminant % p != 0


# -- periods -----------------------------------------------------------------


def _require_admissible(spec: RecurrenceSpec, p: int) -> None:
    if not sympy.isprime(p):
        raise InadmissiblePrime(f"{p} is not prime")
    if not admissible_prime(spec, p):
        raise InadmissiblePrime(f"p={p} divides c or the discriminant of {spec.label()}")


def _order_mod_p(spec: RecurrenceSpec, p: int) -> int:
    # Roots live in F_p, F_{p^2} or F_{p^3}; every root order divides this.
    bound = (p**2 - 1) * (p**3 - 1) // (p - 1)
    C = spec.companion()
    if not _is_identity(mat_pow(C, bound, p), p):
        raise InadmissiblePrime(f"companion matrix has no finite order mod {p}")
    order = bound
    for q, e in sympy.factorint(bound).items():
        for _ in range(e):
            if _is_identity(mat_pow(C, order // q, p), p):
                order //= q
            else:
                break
    return order


@functools.lru_cache(maxsize=512)
def period_table(spec: RecurrenceSpec, p: int, kmax: int) -> PeriodTable:
    """Orders ``N_{p^k}`` of the companion matrix mod ``p^k`` for ``k = 1..kmax``."""
    _require_admissible(spec, p)
    if kmax < 1:
        raise ValueError("level must be >= 1")
    C = spec.companion()
    n = _order_mod_p(spec, p)
    entries = [(1, n)]
    for k in range(2, kmax + 1):
        mod = p**k
        if not _is_identity(mat_pow(C, n, mod), mod):
            n *= p
        entries.append((k, n))
    return PeriodTable(p, tuple(entries))


def period(spec: RecurrenceSpec, p: int, k: int = 1) -> int:
    """``N_{p^k}``: least ``N`` with ``C^N = I (mod p^k)``."""
    return period_table(spec, p, k)[k]


def state_cycle_length(spec: RecurrenceSpec, M: int, cap: int = CYCLE_CAP) -> int:
    """Least period of the state sequence mod ``M`` by direct iteration."""
    a, b, c = spec.a % M, spec.b % M, spec.c % M
    start = tuple(v % M for v in spec.initial)
    u, v, w = start
    for n in range(1, cap + 1):
        u, v, w = v, w, (a * w + b * v + c * u) % M
        if (u, v, w) == start:
            return n
    raise ResourceError(f"no state cycle within {cap} steps mod {M}")


def finite_difference(spec: RecurrenceSpec, ell: int, N: int, j: int, M: int) -> int:
    """``sum_t (-1)^(j-t) C(j,t) x_{ell+tN} mod M``."""
    total = 0
    for t in range(j + 1):
        total += (-1) ** (j - t) * comb(j, t) * term_mod(spec, ell + t * N, M)
    return total % M
