"""Fixed-precision p-adic integers with certified truncated log and exp."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NotAUnit, PrecisionExhausted

INF = math.inf
DEFAULT_PRECISION = 8
MAX_SERIES_TERMS = 10_000


def valuation(x, p: int):
    """p-adic valuation of an integer or Fraction; ``math.inf`` for zero."""
    if x == 0:
        return INF
    if isinstance(x, Fraction):
        return valuation(x.numerator, p) - valuation(x.denominator, p)
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def factorial_valuation_exact(m: int, p: int) -> int:
    total, q = 0, m
    while q >= p:
        q //= p
        total += q
    return total


def inv_mod(x: int, m: int) -> int:
    """Inverse of ``x`` modulo ``m``; raises :class:`NotAUnit` if none exists."""
    try:
        return pow(x, -1, m)
    except ValueError:
        raise NotAUnit(f"{x} is not invertible mod {m}") from None


def reduce_fraction(x: Fraction, p: int, K: int) -> int:
    """Image of a p-integral rational in Z/p^K."""
    mod = p**K
    if x.denominator % p == 0:
        raise DomainError(f"{x} is not p-integral for p={p}")
    return x.numerator * pow(x.denominator, -1, mod) % mod


@dataclass(frozen=True)
class PadicApprox:
    """An element of Z_p known modulo ``p**K``."""

    p: int
    K: int
    r: int

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "r", self.r % self.p**self.K)

    @classmethod
    def of(cls, x, p: int, K: int = DEFAULT_PRECISION) -> "PadicApprox":
        if isinstance(x, Fraction):
            return cls(p, K, reduce_fraction(x, p, K))
        return cls(p, K, int(x))

    @property
    def modulus(self) -> int:
        return self.p**self.K

    def valuation(self):
        """Exact valuation, or ``None`` when ``r == 0`` (only ``>= K`` is known)."""
        if self.r == 0:
            return None
        return valuation(self.r, self.p)

    def lower_valuation(self) -> int:
        v = self.valuation()
        return self.K if v is None else v

    def is_zero(self) -> bool:
        return self.r == 0

    def _coerce(self, other) -> "PadicApprox":
        if isinstance(other, PadicApprox):
            if other.p != self.p:
                raise ValueError("cannot combine p-adic numbers for different primes")
            return other
        return PadicApprox.of(other, self.p, self.K)

    def __add__(self, other):
        o = self._coerce(other)
        K = min(self.K, o.K)
        return PadicApprox(self.p, K, self.r + o.r)

    __radd__ = __add__

    def __neg__(self):
        return PadicApprox(self.p, self.K, -self.r)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        # absolute precision of a product: min(K1 + v2, K2 + v1)
        K = min(self.K + o.lower_valuation(), o.K + self.lower_valuation())
        K = max(1, K)
        return PadicApprox(self.p, K, self.r * o.r)

    __rmul__ = __mul__

    def with_precision(self, K: int) -> "PadicApprox":
        if K > self.K:
            raise PrecisionExhausted(f"cannot raise precision {self.K} -> {K}")
        return PadicApprox(self.p, K, self.r)

    def __eq__(self, other):
        if isinstance(other, PadicApprox):
            K = min(self.K, other.K)
            return self.p == other.p and (self.r - other.r) % self.p**K == 0
        if isinstance(other, (int, Fraction)):
            return self == PadicApprox.of(other, self.p, self.K)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.K, self.r))

    def __repr__(self):
        return f"{self.r} + O({self.p}^{self.K})"


def _last_needed_index(v: int, K: int, p: int, loss) -> int:
    """Largest j with ``j*v - loss(j) < K``; every later term vanishes mod p^K.

    ``loss`` must grow slower than ``j*v``, which holds for ``nu_p(j)`` and
    ``nu_p(j!)`` whenever ``v > 1/(p-1)``.
    """
    last, j, streak = 0, 1, 0
    # j*v - loss(j) is not monotone, so require a long run above K
    while streak < 4 * K + 16:
        if j * v - loss(j) < K:
            last, streak = j, 0
        else:
            streak += 1
        j += 1
        if j > MAX_SERIES_TERMS:
            raise PrecisionExhausted("series truncation exceeded the term cap")
    return last


def log_unit(z: PadicApprox) -> PadicApprox:
    """p-adic logarithm of ``z`` with ``z = 1 mod p`` (``mod 4`` for p = 2).

    The result carries the same absolute precision as ``z``.
    """
    p, K = z.p, z.K
    t = z.r - 1
    need = 2 if p == 2 else 1
    if K < need:
        raise DomainError(f"precision {K} too small to certify log for p={p}")
    v = valuation(t, p) if t % z.modulus else K
    if v < need:
        raise DomainError(f"log_p needs z = 1 mod {p**need}, got {z}")
    if v >= K:
        return PadicApprox(p, K, 0)
    J = _last_needed_index(v, K, p, lambda j: valuation(j, p))
    total = Fraction(0)
    for j in range(1, J + 1):
        total += Fraction((-1) ** (j - 1) * t**j, j)
    return PadicApprox(p, K, reduce_fraction(total, p, K))


def exp_small(w: PadicApprox) -> PadicApprox:
    """p-adic exponential of ``w`` with ``nu_p(w) >= 1`` (``>= 2`` for p = 2)."""
    p, K = w.p, w.K
    need = 2 if p == 2 else 1
    if K < need:
        raise DomainError(f"precision {K} too small to certify exp for p={p}")
    v = valuation(w.r, p) if w.r else K
    if v < need:
        raise DomainError(f"exp_p needs valuation >= {need}, got {w}")
    if v >= K:
        return PadicApprox(p, K, 1)
    J = _last_needed_index(v, K, p, lambda j: factorial_valuation_exact(j, p))
    total, term = Fraction(1), Fraction(1)
    for j in range(1, J + 1):
        term = term * w.r / j
        total += term
    return PadicApprox(p, K, reduce_fraction(total, p, K))
