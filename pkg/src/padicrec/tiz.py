"""Twisted-integral-zero certification and exact zero search.

A twisted integral zero is an ``n`` with ``sum xi_i c_i lambda_i^n = 0`` for
roots of unity ``xi_i``.  The set collapses to the ordinary zero set when

1. ``Q(lambda_i)`` is not Galois (irreducible cubic, non-square discriminant),
2. the log ratio built from ``q(lambda)`` and ``P'(lambda)`` is not an integer,
3. the splitting field has no primitive cube root of unity, certified by a
   prime ``q = 2 (mod 3)`` at which ``P`` splits into distinct linear factors.

The ordinary zero set is found by exact evaluation over a finite window; its
completeness outside the window is not certified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import mpmath
import sympy

from .errors import DegenerateRatio, ReducibleCharPoly
from .sequence import CharPolyData, RecurrenceSpec, char_data, terms

RATIO_TOLERANCE = 1e-6
DEFAULT_WINDOW = (-100, 100)
DEFAULT_Q_MAX = 1000


@dataclass(frozen=True)
class RootData:
    """Complex roots of ``P`` with a Newton-step error estimate for each."""

    roots: tuple
    errors: tuple
    q_values: tuple
    dP_values: tuple
    bits: int

    @property
    def coefficients(self) -> tuple:
        """Binet coefficients ``q(lambda)/P'(lambda)``."""
        return tuple(q / d for q, d in zip(self.q_values, self.dP_values))

    def real_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.roots) if abs(mpmath.im(r)) <= 10 * self.errors[i]]

    def binet(self, n: int):
        with mpmath.workprec(self.bits):
            total = sum(c * r**n for c, r in zip(self.coefficients, self.roots))
            return mpmath.re(total)


@dataclass(frozen=True)
class RatioResult:
    status: str  # "pass" | "fail" | "borderline"
    values: tuple  # (i, j, value) for every tested pair
    passing_pair: tuple | None
    bits: int


@dataclass(frozen=True)
class SplitCertificate:
    q: int
    roots: tuple[int, ...]


@dataclass(frozen=True)
class TizReport:
    status: str  # "certified" | "inconclusive"
    zero_set: tuple[int, ...]
    window: tuple[int, int]
    failed_hypothesis: str | None = None  # "galois" | "ratio" | "cuberoot"
    evidence: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "zero_set": list(self.zero_set),
            "window": list(self.window),
            "failed_hypothesis": self.failed_hypothesis,
            "evidence": self.evidence,
        }


def compute_roots(char: CharPolyData, bits: int = 128) -> RootData:
    with mpmath.workprec(bits + 32):
        roots = mpmath.polyroots(list(char.p_coeffs), maxsteps=200, extraprec=2 * bits)
        refined, errors = [], []
        for r in roots:
            for _ in range(3):
                r = r - char.P(r) / char.dP(r)
            refined.append(r)
            errors.append(abs(char.P(r) / char.dP(r)) + mpmath.mpf(2) ** (-bits))
        q_values = tuple(char.q(r) for r in refined)
        dP_values = tuple(char.dP(r) for r in refined)
    return RootData(tuple(refined), tuple(errors), q_values, dP_values, bits)


def _rational_root(char: CharPolyData) -> int | None:
    # monic integer cubic: rational roots are integer divisors of the constant term
    const = char.p_coeffs[3]
    if const == 0:
        return 0
    for d in sympy.divisors(abs(const)):
        for cand in (d, -d):
            if char.P(cand) == 0:
                return cand
    return None


def is_irreducible(char: CharPolyData) -> bool:
    return _rational_root(char) is None


def galois_check(char: CharPolyData) -> bool:
    """True iff each ``Q(lambda_i)`` is a non-Galois cubic field."""
    root = _rational_root(char)
    if root is not None:
        raise ReducibleCharPoly(f"P has the rational root {root}")
    disc = char.discriminant
    return disc < 0 or isqrt(disc) ** 2 != disc


def _ratio_values(char: CharPolyData, bits: int) -> list[tuple[int, int, object]]:
    data = compute_roots(char, bits)
    out = []
    with mpmath.workprec(bits):
        real = data.real_indices()
        for i in real:
            for j in range(3):
                if j == i:
                    continue
                den = mpmath.log(abs(data.roots[j] / data.roots[i]))
                if abs(den) < mpmath.mpf(2) ** (-bits // 2):
                    continue
                num = mpmath.log(abs(data.q_values[i] * data.dP_values[j]
                                     / (data.q_values[j] * data.dP_values[i])))
                out.append((i, j, num / den))
    return out


def ratio_check(char: CharPolyData, bits: int = 128) -> RatioResult:
    """Test that some log ratio for a real root ``i`` is not an integer.

    Borderline values (within ``RATIO_TOLERANCE`` of an integer) are
    recomputed at 256 bits before giving up.
    """
    for prec in (bits, max(bits, 256)):
        values = _ratio_values(char, prec)
        if not values:
            raise DegenerateRatio("|lambda_i| = |lambda_j| for every candidate pair")
        for i, j, v in values:
            if abs(v - mpmath.nint(v)) > RATIO_TOLERANCE:
                return RatioResult("pass", tuple(values), (i, j), prec)
    # numerically integral to half the working precision counts as a failure
    tiny = mpmath.mpf(2) ** (-prec // 2)
    status = "fail" if all(abs(v - mpmath.nint(v)) < tiny for _, _, v in values) else "borderline"
    return RatioResult(status, tuple(values), None, prec)


def split_roots(char: CharPolyData, q: int) -> tuple[int, ...] | None:
    """Roots of ``P`` mod ``q`` if ``q`` certifies the cube-root condition."""
    if q % 3 != 2 or not sympy.isprime(q):
        return None
    if (char.discriminant * char.p_coeffs[3]) % q == 0:
        return None
    roots = tuple(x for x in range(q) if char.P(x) % q == 0)
    return roots if len(roots) == 3 else None


def cuberoot_check(char: CharPolyData, q_max: int = DEFAULT_Q_MAX) -> SplitCertificate | None:
    """Smallest prime ``q <= q_max``, ``q = 2 mod 3``, at which ``P`` splits.

    ``P`` then has three roots in Q_q, which lacks primitive cube roots of
    unity, so the splitting field embeds into a field without them.
    """
    for q in sympy.primerange(2, q_max + 1):
        roots = split_roots(char, q)
        if roots:
            return SplitCertificate(q, roots)
    return None


def zero_search(spec: RecurrenceSpec, window: tuple[int, int] = DEFAULT_WINDOW) -> list[int]:
    """Indices in the closed window where the exact term vanishes."""
    lo, hi = window
    values = terms(spec, lo, hi + 1, integral=False)
    return [lo + i for i, v in enumerate(values) if v == 0]


def _float(v) -> float:
    return float(mpmath.re(v))


def tiz_set(spec: RecurrenceSpec, window: tuple[int, int] = DEFAULT_WINDOW,
            q_max: int = DEFAULT_Q_MAX, split_prime: int | None = None) -> TizReport:
    """Certify that the twisted integral zeros are the zeros found in ``window``.

    ``split_prime`` pins the prime used for the cube-root condition instead
    of searching for the smallest one.
    """
    char = char_data(spec)
    window = (int(window[0]), int(window[1]))
    zeros = tuple(zero_search(spec, window))
    evidence: dict = {"discriminant": char.discriminant}

    def inconclusive(which: str) -> TizReport:
        return TizReport("inconclusive", zeros, window, which, evidence)

    try:
        if not galois_check(char):
            evidence["galois"] = "discriminant is a square"
            return inconclusive("galois")
    except ReducibleCharPoly as exc:
        evidence["galois"] = str(exc)
        return inconclusive("galois")
    evidence["galois"] = "non-square discriminant"

    try:
        ratio = ratio_check(char)
    except DegenerateRatio as exc:
        evidence["ratio"] = str(exc)
        return inconclusive("ratio")
    evidence["ratio_values"] = [[i, j, round(_float(v), 12)] for i, j, v in ratio.values]
    evidence["ratio_status"] = ratio.status
    if ratio.status != "pass":
        return inconclusive("ratio")
    evidence["ratio_pair"] = list(ratio.passing_pair)

    if split_prime is not None:
        roots = split_roots(char, split_prime)
        cert = SplitCertificate(split_prime, roots) if roots else None
    else:
        cert = cuberoot_check(char, q_max)
    if cert is None:
        evidence["split_prime"] = None
        return inconclusive("cuberoot")
    evidence["split_prime"] = cert.q
    evidence["split_roots"] = list(cert.roots)
    return TizReport("certified", zeros, window, None, evidence)

