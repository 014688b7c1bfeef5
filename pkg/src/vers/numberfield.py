"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Scalars are a + b*sqrt(d) with rational a, b and a fixed natural d.  All
operations (including sign, hence comparisons) are exact: the sign of
a + b*sqrt(d) is decided by comparing a^2 with b^2 d case by case, never by
floating-point approximation.  d = 0 and d = 1 (or any perfect square)
collapse to the rationals.  Scalars from different fields may only be mixed
when one of them is rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence


class FieldError(ArithmeticError):
    """Raised for incompatible fields, division by zero, or singular systems."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    raise FieldError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class FieldScalar:
    """An element a + b*sqrt(d) of Q(sqrt(d))."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))
        if self.d < 0:
            raise FieldError("the field discriminant must be a natural number")
        root = isqrt(self.d)
        if root * root == self.d:
            # perfect square: fold the irrational part away
            object.__setattr__(self, "a", self.a + self.b * root)
            object.__setattr__(self, "b", Fraction(0))
        if self.b == 0:
            object.__setattr__(self, "d", 0)

    # ----- field plumbing ------------------------------------------------------

    def _coerce(self, other) -> "FieldScalar":
        if isinstance(other, FieldScalar):
            return other
        return FieldScalar(_as_fraction(other))

    def _common_d(self, other: "FieldScalar") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0 or self.d == other.d:
            return self.d
        raise FieldError(f"cannot mix sqrt({self.d}) with sqrt({other.d})")

    # ----- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "FieldScalar":
        o = self._coerce(other)
        return FieldScalar(self.a + o.a, self.b + o.b, self._common_d(o))

    __radd__ = __add__

    def __neg__(self) -> "FieldScalar":
        return FieldScalar(-self.a, -self.b, self.d)

    def __sub__(self, other) -> "FieldScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FieldScalar":
        return self._coerce(other) - self

    def __mul__(self, other) -> "FieldScalar":
        o = self._coerce(other)
        d = self._common_d(o)
        return FieldScalar(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        if self.is_zero():
            raise FieldError("division by zero")
        norm = self.a * self.a - self.b * self.b * self.d
        return FieldScalar(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other) -> "FieldScalar":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "FieldScalar":
        return self._coerce(other) * self.inverse()

    # ----- order ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign, by comparing a^2 against b^2 d when signs disagree."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return (self.b > 0) - (self.b < 0)
        if self.a > 0 and self.b > 0:
            return 1
        if self.a < 0 and self.b < 0:
            return -1
        rational_bigger = self.a * self.a > self.b * self.b * self.d
        if self.a > 0:  # b < 0
            return 1 if rational_bigger else -1
        return -1 if rational_bigger else 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, (FieldScalar, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.d == o.d)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def __lt__(self, other) -> bool:
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - self._coerce(other)).sign() >= 0

    def __repr__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.d})"


def scalar(x, d: int = 0) -> FieldScalar:
    """Convenience constructor for rationals (ints, Fractions, "p/q" strings)."""
    return FieldScalar(_as_fraction(x), Fraction(0), d)


Vector = tuple[FieldScalar, ...]
Matrix = tuple[Vector, ...]


def solve_linear(a: Sequence[Sequence[FieldScalar]], rhs: Sequence[FieldScalar]) -> Vector:
    """Solve A x = rhs exactly by Gaussian elimination; raises if singular."""
    n = len(rhs)
    m = [list(row) + [r] for row, r in zip(a, rhs)]
    if any(len(row) != n + 1 for row in m) or len(m) != n:
        raise FieldError("solve_linear requires a square system")
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            raise FieldError("singular linear system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero():
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return tuple(m[r][n] for r in range(n))


def invert_matrix(a: Sequence[Sequence[FieldScalar]]) -> Matrix:
    """Exact matrix inverse via columnwise solves; raises if singular."""
    n = len(a)
    zero, one = FieldScalar(Fraction(0)), FieldScalar(Fraction(1))
    cols = [
        solve_linear(a, tuple(one if r == c else zero for r in range(n)))
        for c in range(n)
    ]
    return tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))
