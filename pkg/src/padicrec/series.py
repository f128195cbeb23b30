"""Interpolating power series of a recurrence along an arithmetic progression.

For a class ``ell`` and step ``N`` with ``C^N = I (mod p^s)`` the function
``f(m) = x_{ell + m N}`` extends to an analytic function on Z_p,

    f(x) = sum_i c_i lambda_i^ell exp(x log(lambda_i^N)),

and its Taylor coefficients are rational combinations of the integer finite
differences ``Delta^j = sum_i c_i lambda_i^ell (lambda_i^N - 1)^j``.
Expanding ``log(1 + y)^k / k!`` in powers of ``y = lambda^N - 1`` and
substituting ``y^j -> Delta^j`` gives every coefficient without leaving Z.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import (
    DomainError,
    HenselFails,
    Indeterminate,
    PrecisionExhausted,
)
from .padic import PadicApprox, factorial_valuation_exact, reduce_fraction
from .sequence import (
    RecurrenceSpec,
    _is_identity,
    _require_admissible,
    mat_pow,
    mat_vec,
    period,
    state_mod,
    term_mod,
)

DEFAULT_K = 8
MAX_DIFFERENCE_ORDER = 400


def default_level(p: int) -> int:
    """Base level s: series are built along steps N with C^N = I mod p^s."""
    return 2 if p == 2 else 1


@functools.lru_cache(maxsize=None)
def log_power_coefficients(k: int, J: int) -> tuple[Fraction, ...]:
    """Coefficients of ``y^0..y^J`` in ``log(1 + y)^k / k!``."""
    log = [Fraction(0)] + [Fraction((-1) ** (j - 1), j) for j in range(1, J + 1)]
    power = [Fraction(1)] + [Fraction(0)] * J
    for _ in range(k):
        nxt = [Fraction(0)] * (J + 1)
        for i, u in enumerate(power):
            if u:
                for j in range(1, J + 1 - i):
                    nxt[i + j] += u * log[j]
        power = nxt
    kf = factorial(k)
    return tuple(c / kf for c in power)


@dataclass(frozen=True)
class SeriesApprox:
    """Coefficients ``beta_k`` of ``f_ell(x) / p^norm`` modulo ``p^K``.

    ``level`` is the s with ``lambda_i^N = 1 mod p^s``; ``norm`` is the
    power of p divided out (``level`` when ``p^level | x_ell``, else 0).
    """

    p: int
    K: int
    ell: int
    N: int
    level: int
    norm: int
    coeffs: tuple[PadicApprox, ...]
    order: int  # number of finite differences used

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    def tail_floor(self, k: int) -> int:
        """Certified lower bound for ``nu_p(beta_k)``."""
        return k * self.level - factorial_valuation_exact(k, self.p) - self.norm

    def evaluate(self, m: int) -> PadicApprox:
        mod = self.p**self.K
        total = 0
        for beta in reversed(self.coeffs):
            total = (total * m + beta.r) % mod
        return PadicApprox(self.p, self.K, total)

    def derivative_at(self, m: int) -> PadicApprox:
        mod = self.p**self.K
        total = 0
        for k in range(self.D, 0, -1):
            total = (total * m + k * self.coeffs[k].r) % mod
        return PadicApprox(self.p, self.K, total)


@dataclass(frozen=True)
class NewtonCount:
    mu: int
    exact: bool
    content: int  # minimal coefficient valuation


@dataclass(frozen=True)
class ZeroCertificate:
    b: PadicApprox
    residual_valuation: int
    multiplicity: int
    b0: int


def _difference_order(p: int, K: int, level: int, norm: int) -> int:
    """Smallest J such that every dropped term j > J has valuation >= K."""
    last, j, streak = 0, 1, 0
    while streak < 4 * K + 16:
        if j * level - factorial_valuation_exact(j, p) - norm < K:
            last, streak = j, 0
        else:
            streak += 1
        j += 1
        if j > MAX_DIFFERENCE_ORDER:
            raise PrecisionExhausted(f"difference order exceeds {MAX_DIFFERENCE_ORDER}")
    return last


def _check_step(spec: RecurrenceSpec, p: int, N: int, level: int) -> None:
    if N < 1 or not _is_identity(mat_pow(spec.companion(), N, p**level), p**level):
        raise DomainError(f"N={N} is not a multiple of the period mod {p}^{level}")


def f_series(spec: RecurrenceSpec, p: int, ell: int, N: int | None = None,
             K: int = DEFAULT_K, D: int | None = None, level: int | None = None,
             J: int | None = None) -> SeriesApprox:
    """Taylor coefficients of ``x_{ell + x N}`` around ``x = 0``.

    ``J`` defaults to ``K + 4`` or more if needed to certify every
    coefficient mod ``p^K``; ``D`` defaults to the last index whose
    coefficient can be non-zero mod ``p^K``.
    """
    _require_admissible(spec, p)
    if level is None:
        level = default_level(p)
    if level < 1 or (p == 2 and level < 2):
        raise DomainError("log/exp need lambda^N = 1 mod p (mod 4 for p = 2)")
    if N is None:
        N = period(spec, p, level)
    _check_step(spec, p, N, level)

    norm = level if term_mod(spec, ell, p**level) == 0 else 0
    needed = _difference_order(p, K, level, norm)
    if J is None:
        J = max(K + 4, needed)
    elif J < needed:
        raise PrecisionExhausted(f"J={J} cannot certify precision {K}; need {needed}")
    if D is None:
        D = J
    denom_loss = factorial_valuation_exact(J, p)
    W = K + norm + denom_loss
    mod = p**W

    # x_{ell + t N} mod p^W for t = 0..J
    step = mat_pow(spec.companion(), N, mod)
    state = state_mod(spec, ell, mod)
    values = []
    for _ in range(J + 1):
        values.append(state[0])
        state = mat_vec(step, state, mod)
    diffs = [
        sum((-1) ** (j - t) * comb(j, t) * values[t] for t in range(j + 1)) % mod
        for j in range(J + 1)
    ]

    scale = p**norm
    coeffs = []
    for k in range(D + 1):
        if k > J:
            coeffs.append(PadicApprox(p, K, 0))
            continue
        e = log_power_coefficients(k, J)
        total = sum((e[j] * diffs[j] for j in range(k, J + 1)), Fraction(0)) / scale
        coeffs.append(PadicApprox(p, K, reduce_fraction(total, p, K)))
    return SeriesApprox(p, K, ell, N, level, norm, tuple(coeffs), J)


def newton_count(series: SeriesApprox) -> NewtonCount:
    """Strassman bound on the number of zeros in Z_p.

    ``exact`` is set when the bound is 0 or 1, where the Newton polygon
    decides the count exactly.
    """
    known = [(k, c.valuation()) for k, c in enumerate(series.coeffs) if c.valuation() is not None]
    if not known:
        raise Indeterminate(f"all coefficients vanish mod {series.p}^{series.K}")
    vmin = min(v for _, v in known)
    k = series.D + 1
    streak = 0
    while streak < 4 * series.K + 16:
        if series.tail_floor(k) <= vmin:
            raise Indeterminate(f"tail coefficient {k} may reach valuation {vmin}")
        streak += 1
        k += 1
    mu = max(k for k, v in known if v == vmin)
    return NewtonCount(mu=mu, exact=mu <= 1, content=vmin)


def _normalized(series: SeriesApprox, content: int) -> tuple[list[int], int]:
    prec = series.K - content
    if prec < 1:
        raise Indeterminate("no precision left after removing the content")
    mod = series.p**prec
    scale = series.p**content
    return [(c.r // scale) % mod for c in series.coeffs], prec


def _poly_eval(coeffs: list[int], x: int, mod: int) -> int:
    total = 0
    for c in reversed(coeffs):
        total = (total * x + c) % mod
    return total


def _poly_deriv_eval(coeffs: list[int], x: int, mod: int) -> int:
    total = 0
    for k in range(len(coeffs) - 1, 0, -1):
        total = (total * x + k * coeffs[k]) % mod
    return total


def hensel_start(series: SeriesApprox) -> int:
    """``-h_0 / h_1 mod p`` for the content-normalised series ``h``."""
    count = newton_count(series)
    h, _ = _normalized(series, count.content)
    p = series.p
    if h[1] % p == 0:
        raise HenselFails("linear coefficient is not a unit after normalisation")
    return (-h[0] * pow(h[1], -1, p)) % p


def hensel_zero(series: SeriesApprox, b0: int) -> ZeroCertificate:
    """Lift an approximate zero ``b0 mod p`` to the unique zero of the series.

    The series is first divided by ``p^content``; the lift needs
    ``h(b0) = 0 mod p`` and ``h'(b0)`` a unit for that normalised ``h``.
    """
    count = newton_count(series)
    h, prec = _normalized(series, count.content)
    p = series.p
    mod = p**prec
    b = b0 % p
    if _poly_eval(h, b, p) != 0:
        raise HenselFails(f"series does not vanish mod p at {b0}")
    if _poly_deriv_eval(h, b, p) % p == 0:
        raise HenselFails(f"derivative is not a unit at {b0}")
    for _ in range(prec.bit_length() + 2):
        value = _poly_eval(h, b, mod)
        if value == 0:
            break
        slope = _poly_deriv_eval(h, b, mod)
        b = (b - value * pow(slope, -1, mod)) % mod
    if _poly_eval(h, b, mod) != 0:
        raise PrecisionExhausted("Newton iteration did not converge")
    residual = series.evaluate(b)
    rv = residual.valuation()
    return ZeroCertificate(
        b=PadicApprox(p, prec, b),
        residual_valuation=series.K if rv is None else rv,
        multiplicity=1,
        b0=b0 % p,
    )


def find_zeros(series: SeriesApprox) -> list[ZeroCertificate]:
    """All zeros reachable by Hensel lifting from ``b0 = 0..p-1``."""
    found = []
    for b0 in range(series.p):
        try:
            found.append(hensel_zero(series, b0))
        except HenselFails:
            continue
    return found


def no_zero_certificate(spec: RecurrenceSpec, p: int, ell: int, N: int | None = None,
                        level: int | None = None) -> bool:
    """True iff ``p^s`` does not divide ``x_ell``.

    Then ``x_n = x_ell (mod p^s)`` on the whole class, so the class has no
    p-adic zero and a constant valuation below s.
    """
    if level is None:
        level = default_level(p)
    if N is not None:
        _check_step(spec, p, N, level)
    return term_mod(spec, ell, p**level) != 0

