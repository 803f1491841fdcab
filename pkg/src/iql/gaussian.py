"""Exact complex scalars with rational real and imaginary parts."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """A complex number ``re + im*i`` with ``re, im`` rational.

    Both parts are stored as :class:`fractions.Fraction`, which already keeps
    lowest terms with a positive denominator, so equal values compare and
    hash equal.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction | str = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value: Number) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot convert {value!r} to GaussianRational")

    @classmethod
    def parse(cls, value) -> GaussianRational:
        """Parse ``[re, im]`` (strings like ``"1/2"`` or ints) or a bare real."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(f"scalar must be a [re, im] pair, got {value!r}")
            return cls(Fraction(value[0]), Fraction(value[1]))
        return cls(Fraction(value))

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: Number) -> GaussianRational:
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: Number) -> GaussianRational:
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Number) -> GaussianRational:
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: Number) -> GaussianRational:
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: Number) -> GaussianRational:
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> GaussianRational:
        return GaussianRational.coerce(other) * self.inverse()

    def __eq__(self, other) -> bool:
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def to_json(self) -> list[str]:
        return [str(self.re), str(self.im)]

    def __repr__(self) -> str:
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
