"""Totally ordered idempotent semifields.

Two instances ship: the Booleans ``BOOL`` and the tropical rationals ``TROP``.
Nonzero elements are stored through their exponent in the value group, an
exact :class:`~fractions.Fraction`, so that the group law (written
multiplicatively) is rational addition and the order is the order of
rationals.  The Boolean semifield is the special case whose value group is
trivial: its only nonzero exponent is ``0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

__all__ = [
    "Semifield",
    "SemifieldValue",
    "BOOL",
    "TROP",
    "get_semifield",
    "tropically_vanishes",
    "vanishes_logs",
    "SemifieldError",
]


class SemifieldError(ValueError):
    """Raised on mixing semifield instances or dividing by zero."""


@dataclass(frozen=True)
class Semifield:
    name: str
    trivial_group: bool

    @property
    def zero(self) -> "SemifieldValue":
        return SemifieldValue(self, None)

    @property
    def one(self) -> "SemifieldValue":
        return SemifieldValue(self, Fraction(0))

    def value(self, exponent: Union[None, int, Fraction, str]) -> "SemifieldValue":
        """Element with the given group exponent; ``None`` is the zero element."""
        if exponent is None:
            return self.zero
        q = Fraction(exponent)
        if self.trivial_group and q != 0:
            raise SemifieldError(f"{self.name} has no nonzero element other than 1")
        return SemifieldValue(self, q)

    def parse(self, text: str) -> "SemifieldValue":
        t = text.strip()
        if self.trivial_group:
            if t == "0":
                return self.zero
            if t == "1":
                return self.one
            raise SemifieldError(f"not a Boolean value: {text!r}")
        if t == "-inf":
            return self.zero
        try:
            return SemifieldValue(self, Fraction(t))
        except (ValueError, ZeroDivisionError) as exc:
            raise SemifieldError(f"not a tropical rational: {text!r}") from exc

    def __repr__(self) -> str:
        return self.name


BOOL = Semifield("B", True)
TROP = Semifield("T", False)


def get_semifield(name: str) -> Semifield:
    key = name.strip().upper()
    if key in ("B", "BOOL", "BOOLEAN"):
        return BOOL
    if key in ("T", "TROP", "TROPICAL"):
        return TROP
    raise SemifieldError(f"unknown semifield {name!r}")


@dataclass(frozen=True)
class SemifieldValue:
    semifield: Semifield
    exponent: Optional[Fraction]

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def _check(self, other: "SemifieldValue") -> None:
        if not isinstance(other, SemifieldValue):
            raise TypeError(f"cannot combine SemifieldValue with {type(other).__name__}")
        if other.semifield is not self.semifield:
            raise SemifieldError(
                f"mixing semifields {self.semifield.name} and {other.semifield.name}"
            )

    def __add__(self, other: "SemifieldValue") -> "SemifieldValue":
        self._check(other)
        if self.exponent is None:
            return other
        if other.exponent is None:
            return self
        return self if self.exponent >= other.exponent else other

    def __mul__(self, other: "SemifieldValue") -> "SemifieldValue":
        self._check(other)
        if self.exponent is None or other.exponent is None:
            return self.semifield.zero
        return SemifieldValue(self.semifield, self.exponent + other.exponent)

    def __truediv__(self, other: "SemifieldValue") -> "SemifieldValue":
        self._check(other)
        if other.exponent is None:
            raise SemifieldError("division by zero")
        if self.exponent is None:
            return self
        return SemifieldValue(self.semifield, self.exponent - other.exponent)

    def __pow__(self, k: int) -> "SemifieldValue":
        if self.exponent is None:
            return self if k > 0 else self.semifield.one
        return SemifieldValue(self.semifield, self.exponent * k)

    def __lt__(self, other: "SemifieldValue") -> bool:
        self._check(other)
        if self.exponent is None:
            return other.exponent is not None
        return other.exponent is not None and self.exponent < other.exponent

    def __le__(self, other: "SemifieldValue") -> bool:
        return self == other or self < other

    def __gt__(self, other: "SemifieldValue") -> bool:
        return other < self

    def __ge__(self, other: "SemifieldValue") -> bool:
        return other <= self

    def __str__(self) -> str:
        if self.semifield.trivial_group:
            return "0" if self.exponent is None else "1"
        if self.exponent is None:
            return "-inf"
        return str(self.exponent)

    def __repr__(self) -> str:
        return f"{self.semifield.name}({self})"


def add(a: SemifieldValue, b: SemifieldValue) -> SemifieldValue:
    return a + b


def mul(a: SemifieldValue, b: SemifieldValue) -> SemifieldValue:
    return a * b


def div(a: SemifieldValue, b: SemifieldValue) -> SemifieldValue:
    return a / b


def vanishes_logs(logs: Iterable[Optional[Fraction]]) -> bool:
    """Tropical vanishing on raw exponents (``None`` = zero element)."""
    best = None
    count = 0
    for x in logs:
        if x is None:
            continue
        if best is None or x > best:
            best, count = x, 1
        elif x == best:
            count += 1
    return best is None or count >= 2


def tropically_vanishes(terms: Iterable[SemifieldValue]) -> bool:
    """True iff every term is zero or the maximum is attained at least twice."""
    return vanishes_logs(t.exponent for t in terms)
