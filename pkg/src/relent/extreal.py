"""The rig [0, ∞].

Addition is the usual one with ``a + ∞ = ∞``.  Multiplication is the usual
one with ``∞ · a = ∞`` for ``a > 0`` and ``∞ · 0 = 0 · ∞ = 0``; this is the
rule IEEE floats get wrong (they give NaN), which is why values are wrapped.

Finite values may be floats or :class:`fractions.Fraction`; arithmetic
keeps whatever type the operands produce, so exact rational checks stay
exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Real


@total_ordering
class ExtendedReal:
    __slots__ = ("value",)

    def __init__(self, value=0.0):
        if isinstance(value, ExtendedReal):
            value = value.value
        if isinstance(value, bool) or not isinstance(value, Real):
            raise TypeError(f"expected a real number, got {value!r}")
        if value != value:
            raise ValueError("NaN is not an extended real")
        if value < 0:
            raise ValueError(f"extended reals are nonnegative, got {value!r}")
        if isinstance(value, float) and math.isinf(value):
            value = math.inf
        self.value = value

    @property
    def is_inf(self) -> bool:
        return isinstance(self.value, float) and math.isinf(self.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other) -> ExtendedReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_inf or other.is_inf:
            return INF
        return ExtendedReal(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, other) -> ExtendedReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero:
            return self
        if other.is_zero:
            return other
        if self.is_inf or other.is_inf:
            return INF
        return ExtendedReal(self.value * other.value)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.value == other.value

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.value < other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return "ExtendedReal(inf)" if self.is_inf else f"ExtendedReal({self.value!r})"

    def __str__(self) -> str:
        return "inf" if self.is_inf else str(self.value)

    def to_json(self):
        """A JSON number, or the string ``"inf"``."""
        if self.is_inf:
            return "inf"
        if isinstance(self.value, Fraction):
            return float(self.value)
        return self.value

    @classmethod
    def from_json(cls, data) -> ExtendedReal:
        if data == "inf":
            return INF
        if isinstance(data, bool) or not isinstance(data, (int, float)):
            raise ValueError(f"not an extended real: {data!r}")
        return cls(data)


def _coerce(x):
    if isinstance(x, ExtendedReal):
        return x
    if isinstance(x, Real) and not isinstance(x, bool):
        return ExtendedReal(x)
    return NotImplemented


ZERO = ExtendedReal(0.0)
INF = ExtendedReal(math.inf)


def ext(x) -> ExtendedReal:
    return x if isinstance(x, ExtendedReal) else ExtendedReal(x)


def deviation(a, b) -> float:
    """∞-aware distance: 0 if both are ∞, ∞ if exactly one is, else |a - b|."""
    a, b = ext(a), ext(b)
    if a.is_inf and b.is_inf:
        return 0.0
    if a.is_inf or b.is_inf:
        return math.inf
    return abs(float(a.value - b.value))


def ext_sum(values) -> ExtendedReal:
    total = ZERO
    for v in values:
        total = total + v
    return total
