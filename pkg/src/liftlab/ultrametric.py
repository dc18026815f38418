"""Exact ultrametric quantities for truncated models.

A truncated model can only ever certify finitely many digits of agreement,
so a vanishing difference is reported as a bound ("<= base^-k"), never as
an exact zero. Both value types below are exact rationals plus a flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Valuation:
    """Divisibility depth of a residue, possibly saturated by the precision.

    ``digits`` is the number of certified trailing zero digits. When
    ``saturated`` is true the residue vanished at working precision and the
    true valuation is only known to be >= ``digits``.
    """

    digits: int
    saturated: bool = False

    def __str__(self) -> str:
        return f">={self.digits}" if self.saturated else str(self.digits)


@dataclass(frozen=True)
class Distance:
    """An ultrametric distance ``base**-v``, or an upper bound for it.

    ``exact`` is false when the two operands agreed through the full working
    precision, in which case only ``distance <= bound`` is known.
    """

    bound: Fraction
    exact: bool = True

    def __str__(self) -> str:
        text = str(self.bound)
        return text if self.exact else f"<={text}"

    def at_most(self, value: Fraction | int) -> bool:
        """True when the distance is certainly <= ``value``."""
        return self.bound <= value

    def at_least(self, value: Fraction | int) -> bool:
        """True when the distance is certainly >= ``value``."""
        return self.exact and self.bound >= value


def exact_distance(base: int, valuation: int) -> Distance:
    return Distance(Fraction(1, base**valuation), exact=True)


def bounded_distance(base: int, precision: int) -> Distance:
    return Distance(Fraction(1, base**precision), exact=False)
