"""Explicit piecewise laws for ``nu_p(x_n)`` and their brute-force check.

A law has modulus ``Q = N_{p^s}`` and, per residue class ``ell mod Q``,
either a constant valuation or ``kappa + mu * nu_p(n - a)`` with an integer
center ``a``.  Classes the engine cannot certify are left underived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import Indeterminate, PrecisionExhausted
from .padic import valuation
from .sequence import RecurrenceSpec, period, residue_array, term
from .series import (
    default_level,
    f_series,
    hensel_start,
    hensel_zero,
    newton_count,
)
from .tiz import DEFAULT_WINDOW, zero_search

MAX_K = 64


@dataclass(frozen=True)
class ConstantClass:
    kappa: int

    def predict(self, n: int, p: int):
        return self.kappa

    def to_dict(self) -> dict:
        return {"case": "C", "kappa": self.kappa}


@dataclass(frozen=True)
class LinearClass:
    center: int
    kappa: int
    mu: int = 1

    def predict(self, n: int, p: int):
        return self.kappa + self.mu * valuation(n - self.center, p)

    def to_dict(self) -> dict:
        return {"case": "L", "a": self.center, "kappa": self.kappa, "mu": self.mu}


@dataclass(frozen=True)
class ValuationLaw:
    p: int
    Q: int
    classes: tuple  # ConstantClass | LinearClass | None (underived) per ell
    exceptions: tuple[tuple[int, int], ...] = ()
    notes: tuple[tuple[int, str], ...] = ()  # why a class is underived

    @property
    def underived(self) -> list[int]:
        return [ell for ell, c in enumerate(self.classes) if c is None]

    @property
    def total(self) -> bool:
        return not self.underived

    def predict(self, n: int):
        """Predicted valuation, ``math.inf`` at a zero, ``None`` if underived."""
        cls = self.classes[n % self.Q]
        return None if cls is None else cls.predict(n, self.p)

    def to_dict(self, compact: bool = True) -> dict:
        """JSON form; with ``compact`` runs of ``C(0)`` classes are omitted."""
        classes = {}
        for ell, cls in enumerate(self.classes):
            if cls is None:
                classes[str(ell)] = {"case": "underived"}
            elif not compact or cls != ConstantClass(0):
                classes[str(ell)] = cls.to_dict()
        return {
            "p": self.p,
            "Q": self.Q,
            "classes": classes,
            "default": {"case": "C", "kappa": 0} if compact else None,
            "underived": self.underived,
            "exceptions": [list(e) for e in self.exceptions],
        }


def _series_class(spec, p, ell, N, K, zeros):
    """Classify one class with ``p^s | x_ell`` from its interpolating series."""
    while True:
        try:
            series = f_series(spec, p, ell, N, K=K)
            count = newton_count(series)
            break
        except (Indeterminate, PrecisionExhausted):
            if 2 * K > MAX_K:
                return None, f"precision exhausted at K={K}"
            K *= 2
    if count.mu == 0:
        return ConstantClass(series.norm + count.content), None
    if count.mu > 1:
        return None, f"Strassman bound {count.mu}: multiple zeros not resolved"
    zero = hensel_zero(series, hensel_start(series))
    mod = zero.b.modulus
    for a in zeros:
        if (a - ell) % N == 0 and ((a - ell) // N - zero.b.r) % mod == 0:
            kappa = series.norm + count.content - valuation(N, p)
            return LinearClass(center=a, kappa=kappa, mu=1), None
    return None, f"zero {zero.b} is not an integer zero of the sequence in the search window"


def derive_law(spec: RecurrenceSpec, p: int, K: int = 8,
               window: tuple[int, int] = DEFAULT_WINDOW) -> ValuationLaw:
    """Derive the valuation law at ``p`` class by class.

    Classes with ``p^s`` not dividing ``x_ell`` are constant below ``s``.
    Others get an interpolating series: no zero gives a constant, a single
    simple zero at an integer zero ``a`` of the sequence gives
    ``kappa + nu_p(n - a)``, anything else stays underived.
    """
    s = default_level(p)
    Q = period(spec, p, s)
    ps = p**s
    classes: list = [None] * Q
    pending = []
    for offset, values in residue_array(spec, 0, Q, ps):
        for i, v in enumerate(values.tolist()):
            if v:
                classes[offset + i] = ConstantClass(valuation(v, p))
            else:
                pending.append(offset + i)

    notes = []
    if pending:
        zeros = zero_search(spec, window)
        for ell in pending:
            cls, why = _series_class(spec, p, ell, Q, K, zeros)
            classes[ell] = cls
            if why:
                notes.append((ell, why))
    return ValuationLaw(p, Q, tuple(classes), (), tuple(notes))


@dataclass(frozen=True)
class Mismatch:
    n: int
    predicted: object
    actual: object  # int, or ">=cap" when x_n vanishes mod p^cap


def verify_law(spec: RecurrenceSpec, p: int, law: ValuationLaw, n_max: int) -> list[Mismatch]:
    """Compare the law with actual valuations for ``1 <= n <= n_max``.

    Terms are carried modulo ``p^cap`` with ``cap`` eight above the largest
    prediction, so every valuation that could matter is exact.  Underived
    classes are skipped.
    """
    preds = {}
    for n in range(1, n_max + 1):
        pred = law.predict(n)
        if pred is not None:
            preds[n] = pred
    finite = [v for v in preds.values() if v != math.inf]
    cap = (max(finite) if finite else 0) + 8
    mod = p**cap
    a, b, c = spec.a, spec.b, spec.c
    u, v, w = (term(spec, 1) % mod, term(spec, 2) % mod, term(spec, 3) % mod)
    out = []
    for n in range(1, n_max + 1):
        if n in preds:
            actual = valuation(u, p) if u else f">={cap}"
            predicted = preds[n]
            if actual != predicted and not (u == 0 and predicted >= cap):
                out.append(Mismatch(n, predicted, actual))
        u, v, w = v, w, (a * w + b * v + c * u) % mod
    return out
