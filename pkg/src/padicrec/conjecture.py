"""Per-prime decision of the valuation conjecture from one pass over residues.

With ``s = 2`` for p = 2 and ``s = 1`` otherwise, ``N = N_{p^s}`` and
``D_ell = x_{ell+N} - x_ell``, a class ``ell`` with ``p^s | x_ell`` and
``D_ell != 0 mod p^{s+1}`` has exactly one p-adic zero ``b``, with

    ell + N b = ell - (x_ell / p^s) (D_ell / p^s)^{-1} N   (mod p).

The conjecture fails when that residue avoids every twisted integral zero
mod p; it holds when every such class is itself a twisted-zero class mod N.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
import sympy

from .errors import InadmissiblePrime, RecurrenceError
from .sequence import (
    RecurrenceSpec,
    _is_identity,
    admissible_prime,
    char_data,
    mat_pow,
    period,
    residue_array,
    term_mod,
)
from .series import default_level
from .tiz import is_irreducible

log = logging.getLogger(__name__)

FAILS, HOLDS, INCONCLUSIVE, SKIPPED = "fails", "holds", "inconclusive", "skipped"


@dataclass(frozen=True)
class FailureCertificate:
    p: int
    level: int
    N: int
    ell: int
    modulus: int  # p^(level+1)
    x_ell: int  # x_ell mod modulus
    x_ell_plus_N: int  # x_{ell+N} mod modulus
    zero_class: int  # ell + N b mod p
    tiz: tuple[int, ...]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tiz"] = list(self.tiz)
        return d


@dataclass(frozen=True)
class PrimeVerdict:
    p: int
    status: str
    witness_ell: int | None = None
    certificate: FailureCertificate | None = None
    N: int | None = None
    tiz_used: tuple[int, ...] = ()
    candidates: int = 0  # classes with p^s | x_ell
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "verdict": self.status,
            "witness_ell": self.witness_ell,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "N": self.N,
            "candidates": self.candidates,
            "tiz_used": list(self.tiz_used),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class _PrimeScan:
    level: int
    N: int
    failure: FailureCertificate | None
    holds: bool
    candidates: int


def _check_hypotheses(spec: RecurrenceSpec, p: int) -> None:
    if not admissible_prime(spec, p):
        raise InadmissiblePrime(f"p={p} divides c or the discriminant")
    if not is_irreducible(char_data(spec)):
        raise RecurrenceError("characteristic polynomial is reducible over Q")


def _scan_prime(spec: RecurrenceSpec, p: int, tiz) -> _PrimeScan:
    _check_hypotheses(spec, p)
    tiz = tuple(sorted(set(int(r) for r in tiz)))
    s = default_level(p)
    N = period(spec, p, s)
    ps, mod = p**s, p ** (s + 1)
    inverse = np.zeros(p, dtype=np.int64)
    for u in range(1, p):
        inverse[u] = pow(u, -1, p)
    tiz_mod_p = np.array(sorted({r % p for r in tiz}), dtype=np.int64)
    tiz_mod_N = np.array(sorted({r % N for r in tiz}), dtype=np.int64)

    failure = None
    holds = True
    candidates = 0
    chunks = zip(residue_array(spec, 0, N, mod), residue_array(spec, 0, N, mod, shift=N))
    for (offset, x), (_, x_next) in chunks:
        ell = np.arange(offset, offset + x.size, dtype=np.int64)
        divisible = x % ps == 0
        diff = (x_next - x) % mod
        simple = divisible & (diff != 0)
        candidates += int(divisible.sum())

        if holds:
            ok = simple & np.isin(ell % N, tiz_mod_N)
            if (divisible & ~ok).any():
                holds = False

        if failure is None and simple.any():
            idx = np.nonzero(simple)[0]
            u = (x[idx] // ps) % p
            w = inverse[(diff[idx] // ps) % p]
            zero_class = (ell[idx] - u * w % p * (N % p)) % p
            escaping = ~np.isin(zero_class, tiz_mod_p)
            if escaping.any():
                k = int(np.argmax(escaping))
                i = int(idx[k])
                failure = FailureCertificate(
                    p=p, level=s, N=N, ell=int(ell[i]), modulus=mod,
                    x_ell=int(x[i]), x_ell_plus_N=int(x_next[i]),
                    zero_class=int(zero_class[k]), tiz=tiz,
                )
    return _PrimeScan(s, N, failure, holds, candidates)


def check_failure(spec: RecurrenceSpec, p: int, tiz) -> FailureCertificate | None:
    """First class ``ell`` whose p-adic zero provably escapes the TIZ set."""
    return _scan_prime(spec, p, tiz).failure


def check_holds(spec: RecurrenceSpec, p: int, tiz) -> bool:
    """True iff every class ``ell`` with ``p^s | x_ell`` has a simple zero and
    is congruent mod N to a twisted integral zero."""
    return _scan_prime(spec, p, tiz).holds


def verdict(spec: RecurrenceSpec, p: int, tiz) -> PrimeVerdict:
    tiz = tuple(sorted(set(int(r) for r in tiz)))
    try:
        result = _scan_prime(spec, p, tiz)
    except InadmissiblePrime as exc:
        return PrimeVerdict(p, SKIPPED, tiz_used=tiz, reason=str(exc))
    except RecurrenceError as exc:
        return PrimeVerdict(p, INCONCLUSIVE, tiz_used=tiz, reason=str(exc))
    if result.failure is not None:
        return PrimeVerdict(p, FAILS, result.failure.ell, result.failure, result.N, tiz,
                            result.candidates)
    if result.holds:
        return PrimeVerdict(p, HOLDS, N=result.N, tiz_used=tiz, candidates=result.candidates)
    return PrimeVerdict(p, INCONCLUSIVE, N=result.N, tiz_used=tiz, candidates=result.candidates,
                        reason="neither criterion applies")


def scan(spec: RecurrenceSpec, p_range: tuple[int, int], tiz, threads: int = 1) -> list[PrimeVerdict]:
    """Verdicts for every prime in the closed range, ordered by p."""
    lo, hi = p_range
    primes = list(sympy.primerange(lo, hi + 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda q: verdict(spec, q, tiz), primes))
    else:
        results = []
        for q in primes:
            results.append(verdict(spec, q, tiz))
            log.debug("p=%d -> %s", q, results[-1].status)
    return sorted(results, key=lambda v: v.p)


def replay_failure(spec: RecurrenceSpec, cert: FailureCertificate) -> bool:
    """Re-check a failure certificate from scratch.

    Uses direct modular powers of the companion matrix only, so it shares
    no code with the block evaluation used by the scanner.
    """
    p, s, N, ell, mod = cert.p, cert.level, cert.N, cert.ell, cert.modulus
    if mod != p ** (s + 1) or not admissible_prime(spec, p):
        return False
    if not _is_identity(mat_pow(spec.companion(), N, p**s), p**s):
        return False
    x = term_mod(spec, ell, mod)
    y = term_mod(spec, ell + N, mod)
    if (x, y) != (cert.x_ell, cert.x_ell_plus_N):
        return False
    if x % p**s or (y - x) % mod == 0:
        return False
    u = (x // p**s) % p
    w = pow(((y - x) % mod) // p**s, -1, p)
    zero_class = (ell - u * w * N) % p
    if zero_class != cert.zero_class:
        return False
    return all(zero_class != r % p for r in cert.tiz)
