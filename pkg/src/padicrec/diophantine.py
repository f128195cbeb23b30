"""Solving ``x_n = m!`` with factorial valuations and exponential growth.

If ``x_n = m!`` then ``nu_p(m!)`` is at least roughly ``m / (p - 1)`` while a
valuation cap bounds ``nu_p(x_n)`` by ``kappa + mu * log_p(n + a)``.  Growth
``gamma^(n-2) <= x_n`` ties ``n`` to ``m``, so the two estimates cross at a
finite ``m_max``; everything below is checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import HypothesisFailed, NoLawAvailable
from .padic import factorial_valuation_exact, valuation
from .sequence import RecurrenceSpec, char_data, term, terms
from .law import LinearClass, ValuationLaw

GAMMA_BITS = 80
M_SEARCH_CAP = 10**6
SMALL_M = 5


def _floor_log(m: int, p: int) -> int:
    """Largest e with ``p^e <= m`` (exact, no floating point)."""
    e, q = 0, p
    while q <= m:
        e += 1
        q *= p
    return e


def factorial_valuation(m: int, p: int) -> tuple[int, float, float]:
    """``nu_p(m!)`` with the bounds ``m/(p-1) - floor(log_p m) - 1`` and ``(m-1)/(p-1)``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    exact = factorial_valuation_exact(m, p)
    lower = Fraction(m, p - 1) - _floor_log(m, p) - 1
    upper = Fraction(m - 1, p - 1)
    return exact, _num(lower), _num(upper)


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else float(x)


@dataclass(frozen=True)
class GrowthBound:
    """Dominant root ``gamma`` of ``P`` inside the rational bracket ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction
    sandwich_ok: bool

    @property
    def gamma(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def error(self) -> float:
        return float(self.hi - self.lo)


def growth_root(spec: RecurrenceSpec, bits: int = GAMMA_BITS) -> GrowthBound:
    """Isolate the real root ``gamma > 1`` by bisection and check the sandwich.

    The sandwich hypothesis ``1/gamma <= x1 <= 1 <= x2 <= gamma <= x3 <= gamma^2``
    is decided with the bracket end that makes each comparison conservative;
    by induction it gives ``gamma^(n-2) <= x_n <= gamma^(n-1)`` for all n >= 1.
    """
    if min(spec.a, spec.b, spec.c) <= 0:
        raise HypothesisFailed("growth bound needs a, b, c > 0")
    char = char_data(spec)
    P = char.P
    # P(1) = 1 - a - b - c < 0 and P is increasing past its only positive root
    lo, hi = Fraction(1), Fraction(1 + spec.a + spec.b + spec.c)
    if P(lo) >= 0:
        raise HypothesisFailed("no real root above 1")
    eps = Fraction(1, 2**bits)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if P(mid) < 0:
            lo = mid
        else:
            hi = mid
    x1, x2, x3 = term(spec, 1), term(spec, 2), term(spec, 3)
    ok = x1 * lo >= 1 and x1 <= 1 <= x2 and x2 <= lo and hi <= x3 and x3 <= lo * lo
    if not ok:
        raise HypothesisFailed(f"initial values {x1}, {x2}, {x3} fail the growth sandwich")
    return GrowthBound(lo, hi, ok)


@dataclass(frozen=True)
class ValuationCap:
    """``nu_p(x_n) <= kappa + mu * max_i nu_p(n - a_i)`` with ``offset = max(-a_i)``."""

    kappa: int
    mu: int
    offset: int = 0
    source: str = "given"

    @classmethod
    def from_law(cls, law: ValuationLaw) -> "ValuationCap":
        if not law.total:
            raise NoLawAvailable(f"law at p={law.p} has underived classes {law.underived}")
        kappa = max(abs(c.kappa) for c in law.classes)
        linear = [c for c in law.classes if isinstance(c, LinearClass)]
        mu = max((c.mu for c in linear), default=0)
        offset = max((max(-c.center, 0) for c in linear), default=0)
        return cls(kappa, mu, offset, "law")

    @classmethod
    def empirical(cls, spec: RecurrenceSpec, p: int, centers, n_max: int = 10_000) -> "ValuationCap":
        """Smallest ``kappa`` with ``mu = 1`` consistent with ``x_1..x_n_max``.

        This is observed, not proved; certificates built on it say so.
        """
        centers = list(centers)
        kappa = 0
        for n, x in enumerate(terms(spec, 1, n_max + 1), start=1):
            if x == 0:
                continue
            lift = max((valuation(n - a, p) for a in centers if n != a), default=0)
            kappa = max(kappa, valuation(x, p) - lift)
        offset = max((max(-a, 0) for a in centers), default=0)
        return cls(kappa, 1 if centers else 0, offset, "empirical")


@dataclass(frozen=True)
class BoundCertificate:
    p: int
    m_max: int
    n_max: int
    cap: ValuationCap
    gamma_lo: Fraction

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m_max": self.m_max,
            "n_max": self.n_max,
            "kappa": self.cap.kappa,
            "mu": self.cap.mu,
            "offset": self.cap.offset,
            "cap_source": self.cap.source,
            "gamma_lower": float(self.gamma_lo),
        }


def index_bound(m: int, log_gamma: float) -> float:
    """Upper bound ``m log(m/2) / log gamma + 2`` for n with ``x_n = m!``, m > 5."""
    return m * math.log(m / 2) / log_gamma + 2


def bound_holds(m: int, p: int, cap: ValuationCap, log_gamma: float) -> bool:
    """Whether ``x_n = m!`` is still possible for this ``m`` by the valuation chain."""
    lhs = m / (p - 1) - math.log(m) / math.log(p) - 1
    if cap.mu == 0:
        return lhs <= cap.kappa
    rhs = math.log(index_bound(m, log_gamma) + cap.offset) / math.log(p)
    return (lhs - cap.kappa) / cap.mu <= rhs


def factorial_bounds(spec: RecurrenceSpec, p: int, cap=None) -> BoundCertificate:
    """Finite bounds on ``(m, n)`` for ``x_n = m!``.

    ``cap`` is a :class:`ValuationCap` or a :class:`ValuationLaw`.
    ``m_max`` is the least ``m > 5`` at which the chain breaks.
    """
    if cap is None:
        raise NoLawAvailable("a valuation law or cap is required")
    if isinstance(cap, ValuationLaw):
        cap = ValuationCap.from_law(cap)
    growth = growth_root(spec)
    log_gamma = math.log(float(growth.lo))  # lower end keeps n_max conservative
    m = SMALL_M + 1
    while bound_holds(m, p, cap, log_gamma):
        m += 1
        if m > M_SEARCH_CAP:
            raise HypothesisFailed("valuation chain does not close below the search cap")
    n_max = math.ceil(index_bound(m, log_gamma)) + 2
    return BoundCertificate(p, m, n_max, cap, growth.lo)


def solve_factorial(spec: RecurrenceSpec, cert: BoundCertificate) -> set[tuple[int, int]]:
    """All ``(n, m)`` with ``1 <= n <= n_max``, ``1 <= m <= m_max`` and ``x_n = m!``."""
    values = terms(spec, 1, cert.n_max + 1)
    index = {}
    for n, x in enumerate(values, start=1):
        index.setdefault(x, []).append(n)
    found = set()
    f = 1
    for m in range(1, max(cert.m_max, SMALL_M) + 1):
        f *= m
        for n in index.get(f, ()):
            found.add((n, m))
    return found

