from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

Rational = Union[int, Fraction]


def format_rational(value: Fraction) -> str:
    """Decimal text for terminating fractions, `p/q` otherwise."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    denominator = value.denominator
    digits = 0
    while denominator % 10 == 0:
        denominator //= 10
        digits += 1
    while denominator % 2 == 0 or denominator % 5 == 0:
        denominator //= 2 if denominator % 2 == 0 else 5
        digits += 1
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    scaled = abs(value) * 10**digits
    text = str(scaled.numerator).rjust(digits + 1, "0")
    sign = "-" if value < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


@total_ordering
@dataclass(frozen=True)
class Penalty:
    """Extended nonnegative rational: a finite value, or infinity (`value is None`)."""

    value: Optional[Fraction]

    @classmethod
    def finite(cls, value: Rational) -> "Penalty":
        value = Fraction(value)
        if value < 0:
            raise ValueError(f"Penalties are nonnegative, got {value}")
        return cls(value)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __lt__(self, other: "Penalty") -> bool:
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.value < other.value

    def __str__(self) -> str:
        return "inf" if self.is_infinite else format_rational(self.value)


INFINITE = Penalty(None)
ZERO = Penalty(Fraction(0))
