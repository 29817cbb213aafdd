"""Interval locales, their opposites, adjoined bottoms and finite products.

Elements of ``L_+`` are either :data:`BOTTOM` (the adjoined initial element)
or :class:`fractions.Fraction` values inside the closed interval.  All order
computations are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Sequence, Union


class LocaleError(ValueError):
    """Raised for out-of-domain elements or violated preconditions."""


class _Bottom:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()

Element = Union[Fraction, _Bottom]


class Orientation(enum.Enum):
    STANDARD = "standard"
    OPPOSITE = "opposite"


def to_rational(value, digits: int = 12) -> Fraction:
    """Convert ``value`` to an exact rational.

    Strings may be decimals (``"0.25"``) or ``"p/q"``.  Floats are rounded to
    ``digits`` decimal places first so that computed distances do not carry
    binary noise into the lattice layer.
    """
    if isinstance(value, bool):
        raise LocaleError(f"not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise LocaleError(f"not a finite number: {value!r}")
        return Fraction(round(Decimal(repr(value)), digits))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                return Fraction(text)
            return Fraction(Decimal(text))
        except (ValueError, ZeroDivisionError, InvalidOperation):
            raise LocaleError(f"cannot parse rational {value!r}") from None
    raise LocaleError(f"cannot convert {value!r} to a rational")


def format_rational(q: Fraction) -> str:
    """Render as ``"p"`` or ``"p/q"``; inverse of :func:`to_rational`."""
    return str(q)


def parse_element(value, digits: int = 12) -> Element:
    if value is BOTTOM or (isinstance(value, str) and value.strip().lower() == "bottom"):
        return BOTTOM
    return to_rational(value, digits)


def format_element(a: Element) -> str:
    return "bottom" if a is BOTTOM else format_rational(a)


@dataclass(frozen=True)
class IntervalLocale:
    """A closed rational interval ``[lo, hi]``, possibly with reversed order.

    ``IntervalLocale(0, R, Orientation.OPPOSITE)`` is ``[0,R]^op``: its top is
    ``0`` and its initial element is ``R``.
    """

    lo: Fraction
    hi: Fraction
    orientation: Orientation = Orientation.STANDARD

    def __post_init__(self):
        object.__setattr__(self, "lo", to_rational(self.lo))
        object.__setattr__(self, "hi", to_rational(self.hi))
        if not self.lo < self.hi:
            raise LocaleError(f"degenerate interval [{self.lo}, {self.hi}]")

    @classmethod
    def unit(cls) -> "IntervalLocale":
        return cls(Fraction(0), Fraction(1))

    @classmethod
    def opposite_of(cls, hi, lo=0) -> "IntervalLocale":
        return cls(to_rational(lo), to_rational(hi), Orientation.OPPOSITE)

    @property
    def is_opposite(self) -> bool:
        return self.orientation is Orientation.OPPOSITE

    def contains(self, a) -> bool:
        return a is BOTTOM or (isinstance(a, (int, Fraction)) and self.lo <= a <= self.hi)

    def check(self, a) -> Element:
        if not self.contains(a):
            raise LocaleError(f"{a!r} is not an element of {self}_+")
        return a if a is BOTTOM else Fraction(a)

    def check_value(self, a) -> Fraction:
        if a is BOTTOM:
            raise LocaleError("expected an element of L, got the adjoined bottom")
        return self.check(a)

    def key(self, a):
        """Sort key realising the ``L_+`` order (BOTTOM first)."""
        a = self.check(a)
        if a is BOTTOM:
            return (0, Fraction(0))
        return (1, -a if self.is_opposite else a)

    def leq(self, a, b) -> bool:
        return self.key(a) <= self.key(b)

    def lt(self, a, b) -> bool:
        return self.key(a) < self.key(b)

    def top(self) -> Fraction:
        return self.lo if self.is_opposite else self.hi

    def initial(self) -> Fraction:
        return self.hi if self.is_opposite else self.lo

    def meet(self, elements: Iterable) -> Element:
        """Greatest lower bound in ``L_+``; the empty meet is :meth:`top`."""
        return min(elements, key=self.key, default=self.top())

    def join(self, elements: Iterable) -> Element:
        """Least upper bound in ``L_+``; the empty join is :data:`BOTTOM`."""
        return max(elements, key=self.key, default=BOTTOM)

    def sorted(self, elements: Iterable) -> list:
        return sorted(set(elements), key=self.key)

    def between(self, a, b) -> Fraction:
        """A witness of density: strictly between ``a`` and ``b`` (midpoint)."""
        a, b = self.check_value(a), self.check_value(b)
        if not self.lt(a, b):
            raise LocaleError(f"between() needs {a} < {b} in the locale order")
        return (a + b) / 2

    def neg(self, a) -> Element:
        """Pseudo-complement in ``L_+``: bottom unless ``a`` is bottom."""
        a = self.check(a)
        return self.top() if a is BOTTOM else BOTTOM

    def omega(self, y, sample: Iterable) -> frozenset:
        """The points of ``sample`` strictly below ``y`` (trace of ``y -> L_<y``)."""
        y = self.check(y)
        top = self.top()
        pts = []
        for s in sample:
            s = self.check_value(s)
            if s == top:
                raise LocaleError("omega samples must avoid the top element")
            pts.append(s)
        return frozenset(s for s in pts if self.lt(s, y))

    def to_dict(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "orientation": self.orientation.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IntervalLocale":
        try:
            orientation = Orientation(data.get("orientation", "standard"))
        except ValueError:
            raise LocaleError(f"unknown orientation {data.get('orientation')!r}") from None
        return cls(to_rational(data["lo"]), to_rational(data["hi"]), orientation)

    def __str__(self) -> str:
        suffix = "^op" if self.is_opposite else ""
        return f"[{self.lo},{self.hi}]{suffix}"


@dataclass(frozen=True)
class ProductLocale:
    """Finite product of interval locales with the componentwise order."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise LocaleError("a product locale needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @property
    def arity(self) -> int:
        return len(self.factors)

    def check(self, a: Sequence) -> tuple:
        a = tuple(a)
        if len(a) != self.arity:
            raise LocaleError(f"expected a {self.arity}-tuple, got {a!r}")
        return tuple(L.check_value(x) for L, x in zip(self.factors, a))

    def leq(self, a, b) -> bool:
        a, b = self.check(a), self.check(b)
        return all(L.leq(x, y) for L, x, y in zip(self.factors, a, b))

    def meet(self, elements: Iterable) -> tuple:
        elements = [self.check(e) for e in elements]
        if not elements:
            return self.top()
        return tuple(L.meet(col) for L, col in zip(self.factors, zip(*elements)))

    def join(self, elements: Iterable) -> tuple:
        elements = [self.check(e) for e in elements]
        if not elements:
            return self.initial()
        return tuple(L.join(col) for L, col in zip(self.factors, zip(*elements)))

    def top(self) -> tuple:
        return tuple(L.top() for L in self.factors)

    def initial(self) -> tuple:
        return tuple(L.initial() for L in self.factors)

    def neg(self, a):
        raise LocaleError("negation is only supported on totally ordered locales")

    def omega(self, y, sample):
        raise LocaleError("omega is only supported on totally ordered locales")

    def axis(self, s) -> tuple:
        """The first-factor axis embedding ``s -> (s, i, ..., i)``."""
        first = self.factors[0].check_value(s)
        return (first,) + tuple(L.initial() for L in self.factors[1:])
