"""Exact scalars: memoized factorials, Gaussian rationals and multiples of pi.

Rationals are :class:`fractions.Fraction`; integers are Python ints.
Nothing in this module touches floating point.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from numbers import Rational

__all__ = [
    "factorial",
    "falling_ratio",
    "GaussianRational",
    "PiScalar",
    "as_gaussian",
]

_FACTORIALS = [1]
_FACTORIAL_LOCK = threading.Lock()


def factorial(n: int) -> int:
    """Return ``n!`` from a monotonically growing memo table."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    table = _FACTORIALS
    if n < len(table):
        return table[n]
    with _FACTORIAL_LOCK:
        value = table[-1]
        for i in range(len(table), n + 1):
            value *= i
            table.append(value)
        return table[n]


def falling_ratio(s: int, t: int) -> int:
    """Return ``s! / (s - t)!`` as the product ``s (s-1) ... (s-t+1)``."""
    if t < 0 or s < 0:
        raise ValueError(f"falling_ratio needs nonnegative arguments, got ({s}, {t})")
    if t > s:
        raise ValueError(f"falling_ratio needs t <= s, got s={s}, t={t}")
    result = 1
    for i in range(s - t + 1, s + 1):
        result *= i
    return result


_NUM = r"[0-9]+(?:/[0-9]+)?"
_GAUSS_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?"
    rf"(?:(?P<isign>[+-])?(?:(?P<im>{_NUM})\*)?i)?$"
)


class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        re_ = re if isinstance(re, Fraction) else Fraction(re)
        im_ = im if isinstance(im, Fraction) else Fraction(im)
        object.__setattr__(self, "re", re_)
        object.__setattr__(self, "im", im_)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse the canonical text form, e.g. ``-116`` or ``1/2-3/4*i``."""
        s = text.strip().replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        m = _GAUSS_RE.match(s)
        if not s or m is None or not (m.group("re") or s.endswith("i")):
            raise ValueError(f"not a Gaussian rational: {text!r}")
        re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
        im_part = Fraction(0)
        if s.endswith("i"):
            im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
            if m.group("isign") == "-":
                im_part = -im_part
            elif m.group("isign") is None and m.group("re"):
                # "3i" style without a sign between parts is ambiguous
                raise ValueError(f"not a Gaussian rational: {text!r}")
        return cls(re_part, im_part)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = other.abs_sq()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conj()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        mag = abs(self.im)
        im_text = "i" if mag == 1 else f"{mag}*i"
        if self.re == 0:
            return im_text if self.im > 0 else f"-{im_text}"
        return f"{self.re}{'+' if self.im > 0 else '-'}{im_text}"

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"


def _coerce(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational)):
        return GaussianRational(Fraction(value))
    return NotImplemented


def as_gaussian(value) -> GaussianRational:
    """Coerce ints, Fractions, strings and Gaussian rationals."""
    if isinstance(value, str):
        return GaussianRational.parse(value)
    if isinstance(value, complex):
        raise TypeError("floating complex numbers are not exact; pass a string")
    out = _coerce(value)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")
    return out


class PiScalar:
    """Exact value ``coeff * pi`` with a Gaussian rational coefficient.

    Ordering is defined only between real multiples of pi; it compares the
    coefficients, so pi itself never gets approximated.
    """

    __slots__ = ("coeff",)

    def __init__(self, coeff=0):
        object.__setattr__(self, "coeff", as_gaussian(coeff))

    def __setattr__(self, name, value):
        raise AttributeError("PiScalar is immutable")

    @classmethod
    def parse(cls, text: str) -> "PiScalar":
        s = text.strip().replace(" ", "")
        if s in ("0", "0*pi"):
            return cls(0)
        if not s.endswith("*pi"):
            if s == "pi":
                return cls(1)
            raise ValueError(f"not a pi multiple: {text!r}")
        return cls(GaussianRational.parse(s[: -len("*pi")]))

    def is_real(self) -> bool:
        return self.coeff.im == 0

    def sign(self) -> int:
        if self.coeff.im != 0:
            raise ValueError(f"sign of non-real value {self}")
        return (self.coeff.re > 0) - (self.coeff.re < 0)

    def __bool__(self):
        return bool(self.coeff)

    def __add__(self, other):
        if isinstance(other, PiScalar):
            return PiScalar(self.coeff + other.coeff)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PiScalar):
            return PiScalar(self.coeff - other.coeff)
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return PiScalar(-self.coeff)

    def __mul__(self, other):
        if isinstance(other, PiScalar):
            raise TypeError("product of two pi multiples leaves the pi-line")
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return PiScalar(self.coeff * other)

    __rmul__ = __mul__

    def conj(self) -> "PiScalar":
        return PiScalar(self.coeff.conj())

    def _real_coeff(self, other) -> tuple[Fraction, Fraction]:
        if isinstance(other, PiScalar):
            o = other.coeff
        elif other == 0:
            o = GaussianRational(0)
        else:
            raise TypeError(f"cannot order PiScalar against {other!r}")
        if self.coeff.im != 0 or o.im != 0:
            raise ValueError("ordering is only defined for real multiples of pi")
        return self.coeff.re, o.re

    def __lt__(self, other):
        a, b = self._real_coeff(other)
        return a < b

    def __le__(self, other):
        a, b = self._real_coeff(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._real_coeff(other)
        return a > b

    def __ge__(self, other):
        a, b = self._real_coeff(other)
        return a >= b

    def __eq__(self, other):
        if isinstance(other, PiScalar):
            return self.coeff == other.coeff
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.coeff
        return NotImplemented

    def __hash__(self):
        return hash(("pi", self.coeff))

    def __float__(self):
        if self.coeff.im != 0:
            raise ValueError("non-real PiScalar has no float value")
        import math

        return float(self.coeff.re) * math.pi

    def __complex__(self):
        import math

        return complex(self.coeff) * math.pi

    def __str__(self):
        if not self.coeff:
            return "0"
        c = self.coeff
        if c.re != 0 and c.im != 0:
            return f"({c})*pi"
        return f"{c}*pi"

    def __repr__(self):
        return f"PiScalar({str(self)!r})"
