"""Exact scalar utilities: rational square roots and a quadratic extension.

Coefficients throughout the package are ints or ``fractions.Fraction``.  One
operation — normalizing a line map whose conformal factor is a positive
non-square rational — needs sqrt(d) for a fixed d.  :class:`QuadExt` models
``a + b*sqrt(d)`` with exact rational a, b so that path stays exact instead
of falling back to floats.
"""

from __future__ import annotations

import math
from fractions import Fraction

_RATIONAL = (int, Fraction)


def rational_sqrt(x) -> Fraction | None:
    """Exact square root of a rational, or None when x is not a square."""
    x = Fraction(x)
    if x < 0:
        return None
    if x == 0:
        return Fraction(0)
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def _strip_square_part(n: int) -> tuple[int, int]:
    # n > 0 -> (r, d) with n = r*r*d, d free of small square factors.
    r, d = 1, 1
    p = 2
    while p * p <= n and p < 100000:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            r *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    # whatever remains is prime or a product of large primes; try a last
    # perfect-square check on it before giving up on further splitting
    s = math.isqrt(n)
    if s * s == n:
        r *= s
    else:
        d *= n
    return r, d


def split_square(x) -> tuple[Fraction, int]:
    """Write a positive rational as s^2 * d with integer d >= 1.

    d == 1 exactly when x is a rational square.  d is kept small where a
    bounded factorization finds square parts; correctness never depends on d
    being squarefree.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("split_square needs a positive rational")
    n = x.numerator * x.denominator
    r, d = _strip_square_part(n)
    return Fraction(r, x.denominator), d


class QuadExt:
    """Element a + b*sqrt(d) of a real quadratic extension of Q.

    d is a fixed positive non-square integer per instance family; arithmetic
    between elements with different d is refused.  Supports mixed arithmetic
    with ints and Fractions, which is all the linear algebra needs.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    # -- helpers -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError("mixed quadratic extensions")
            return other
        if isinstance(other, _RATIONAL):
            return QuadExt(other, 0, self.d)
        return None

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b:
            raise ValueError("not a rational element")
        return self.a

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return 0 if a == 0 else (1 if a > 0 else -1)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 d
        lhs, rhs = a * a, b * b * self.d
        if a > 0:  # b < 0
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadExt(o.a - self.a, o.b - self.b, self.d)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a * o.a + self.b * o.b * self.d,
                       self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        norm = o.a * o.a - o.b * o.b * o.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        inv = QuadExt(o.a / norm, -o.b / norm, self.d)
        return self * inv

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, _RATIONAL):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.d})"
        b = str(self.b)
        if not b.startswith("-"):
            b = "+" + b
        return f"{self.a}{b}*sqrt({self.d})"


def exact_sqrt(x):
    """sqrt of a positive rational as a Fraction or a QuadExt."""
    r = rational_sqrt(x)
    if r is not None:
        return r
    s, d = split_square(x)
    return QuadExt(0, s, d)
