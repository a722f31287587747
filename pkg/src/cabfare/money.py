"""Integer-minor-unit money type.

All fare arithmetic in this project runs on integer cents/pence to keep
results exact; fractional values only appear transiently inside an
operation and are rounded half-away-from-zero at its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

MINOR_PER_MAJOR = 100


class CurrencyMismatch(ValueError):
    """Arithmetic attempted between two different currencies."""


def round_half_away(x: float | Fraction | Decimal) -> int:
    """Round to the nearest integer, ties away from zero."""
    if x >= 0:
        return int((Fraction(x) + Fraction(1, 2)).__floor__())
    return -round_half_away(-x)


@dataclass(frozen=True, order=False)
class Money:
    """An amount in integer minor units (cents, pence) of one currency."""

    amount_minor: int
    currency: str

    def __post_init__(self) -> None:
        if not isinstance(self.amount_minor, int):
            raise TypeError(f"amount_minor must be int, got {type(self.amount_minor).__name__}")
        if not self.currency:
            raise ValueError("currency code required")

    @classmethod
    def from_major(cls, amount: str | float | int, currency: str) -> "Money":
        """Build from a decimal major-unit amount, e.g. ``"2.50"`` -> 250 minor."""
        minor = Decimal(str(amount)) * MINOR_PER_MAJOR
        if minor != int(minor):
            raise ValueError(f"{amount} has sub-minor-unit precision")
        return cls(int(minor), currency)

    def _check(self, other: "Money") -> None:
        if self.currency != other.currency:
            raise CurrencyMismatch(f"{self.currency} vs {other.currency}")

    def __add__(self, other: "Money") -> "Money":
        self._check(other)
        return Money(self.amount_minor + other.amount_minor, self.currency)

    def __sub__(self, other: "Money") -> "Money":
        self._check(other)
        return Money(self.amount_minor - other.amount_minor, self.currency)

    def __mul__(self, n: int) -> "Money":
        if not isinstance(n, int):
            raise TypeError("use scaled() for non-integer factors")
        return Money(self.amount_minor * n, self.currency)

    __rmul__ = __mul__

    def __lt__(self, other: "Money") -> bool:
        self._check(other)
        return self.amount_minor < other.amount_minor

    def __le__(self, other: "Money") -> bool:
        self._check(other)
        return self.amount_minor <= other.amount_minor

    def scaled(self, factor: float | str) -> "Money":
        """Multiply by a decimal factor, rounding half-away-from-zero.

        The factor goes through ``Decimal(str(...))`` so human-entered
        coefficients like 0.9 behave as written rather than as binary floats.
        """
        exact = Fraction(Decimal(str(factor))) * self.amount_minor
        return Money(round_half_away(exact), self.currency)

    def max(self, other: "Money") -> "Money":
        self._check(other)
        return self if self.amount_minor >= other.amount_minor else other

    @property
    def major_str(self) -> str:
        """Two-decimal display string, e.g. 250 -> ``"2.50"``."""
        sign = "-" if self.amount_minor < 0 else ""
        units, cents = divmod(abs(self.amount_minor), MINOR_PER_MAJOR)
        return f"{sign}{units}.{cents:02d}"

    def __str__(self) -> str:
        return f"{self.major_str} {self.currency}"


def mean_minor(amounts_minor: list[int]) -> int:
    """Mean of minor-unit amounts, rounded half-away-from-zero."""
    if not amounts_minor:
        raise ValueError("mean of empty list")
    return round_half_away(Fraction(sum(amounts_minor), len(amounts_minor)))
