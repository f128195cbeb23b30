"""p-adic valuations of third-order linear recurrences."""

__version__ = "0.1.0"

from .sequence import MTRIPELL, TRIBONACCI, TRIPELL, RecurrenceSpec, period, term, term_mod  # noqa: E402
