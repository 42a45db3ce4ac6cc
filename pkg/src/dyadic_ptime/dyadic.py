"""Exact dyadic rationals in lowest form, their literal syntax and the
two-bits-per-symbol tau* encoding.

A dyadic is stored as a signed odd mantissa and an exponent, value
``mantissa * 2**exponent``; zero is the single pair (0, 0).  Every
arithmetic helper reports its limb work to the active digit-op tally
(see :func:`counting`).
"""

from __future__ import annotations

import contextlib
import contextvars
import re
from fractions import Fraction
from typing import Iterator, Union

__all__ = [
    "Dyadic",
    "DyadicError",
    "MalformedLiteral",
    "NotLowestForm",
    "DomainError",
    "Tally",
    "counting",
    "charge",
    "limbs",
    "dyadic",
    "dyadic_from_string",
    "to_string",
    "tau_star_encode",
    "tau_star_decode",
    "length",
    "floor",
    "round_to_precision",
    "add",
    "sub",
    "mul",
    "neg",
    "compare",
]

LIMB_BITS = 64


class DyadicError(ValueError):
    pass


class MalformedLiteral(DyadicError):
    pass


class NotLowestForm(MalformedLiteral):
    pass


class DomainError(DyadicError):
    pass


# -- digit-op tally ---------------------------------------------------------

class Tally:
    """Running count of primitive limb operations."""

    __slots__ = ("ops",)

    def __init__(self) -> None:
        self.ops = 0

    def __repr__(self) -> str:
        return f"Tally(ops={self.ops})"


_ACTIVE: contextvars.ContextVar[Tally | None] = contextvars.ContextVar(
    "dyadic_tally", default=None)


@contextlib.contextmanager
def counting() -> Iterator[Tally]:
    """Count digit-ops charged inside the block.

    Nested blocks each see their own count; the outer block is charged
    with the inner work as well.
    """
    outer = _ACTIVE.get()
    tally = Tally()
    token = _ACTIVE.set(tally)
    try:
        yield tally
    finally:
        _ACTIVE.reset(token)
        if outer is not None:
            outer.ops += tally.ops


def charge(ops: int) -> None:
    tally = _ACTIVE.get()
    if tally is not None:
        tally.ops += ops


def limbs(value: int) -> int:
    return max(1, -(-abs(value).bit_length() // LIMB_BITS))


# -- the value type ---------------------------------------------------------

def _normalize(m: int, e: int) -> tuple[int, int]:
    if m == 0:
        return 0, 0
    tz = (m & -m).bit_length() - 1
    return m >> tz, e + tz


class Dyadic:
    """Immutable exact dyadic rational ``m * 2**e`` with odd ``m``."""

    __slots__ = ("_m", "_e")

    def __init__(self, mantissa: int = 0, exponent: int = 0) -> None:
        m, e = _normalize(int(mantissa), int(exponent))
        object.__setattr__(self, "_m", m)
        object.__setattr__(self, "_e", e)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def _raw(cls, m: int, e: int) -> Dyadic:
        self = object.__new__(cls)
        object.__setattr__(self, "_m", m)
        object.__setattr__(self, "_e", e)
        return self

    @classmethod
    def from_fraction(cls, q: Fraction) -> Dyadic:
        den = q.denominator
        if den & (den - 1):
            raise DomainError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(den.bit_length() - 1))

    @classmethod
    def pow2(cls, e: int) -> Dyadic:
        return cls._raw(1, e)

    # fields in the sign / magnitude / exponent view
    @property
    def sign(self) -> int:
        return -1 if self._m < 0 else 1

    @property
    def mantissa(self) -> int:
        return abs(self._m)

    @property
    def exponent(self) -> int:
        return self._e

    @property
    def signed_mantissa(self) -> int:
        return self._m

    def is_zero(self) -> bool:
        return self._m == 0

    def is_integer(self) -> bool:
        return self._e >= 0

    def frac_bits(self) -> int:
        """Number of fractional binary digits of the lowest-form literal."""
        return max(0, -self._e)

    def to_fraction(self) -> Fraction:
        if self._e >= 0:
            return Fraction(self._m << self._e)
        return Fraction(self._m, 1 << -self._e)

    def shift(self, k: int) -> Dyadic:
        """Exact multiplication by ``2**k``."""
        charge(1)
        if self._m == 0:
            return self
        return Dyadic._raw(self._m, self._e + k)

    # arithmetic
    def _aligned(self, other: Dyadic) -> tuple[int, int, int]:
        e = min(self._e, other._e)
        a = self._m << (self._e - e)
        b = other._m << (other._e - e)
        charge(max(limbs(a), limbs(b)))
        return a, b, e

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other._m == 0:
            return self
        if self._m == 0:
            return other
        a, b, e = self._aligned(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        charge(limbs(self._m) * limbs(other._m))
        if self._m == 0 or other._m == 0:
            return ZERO
        # product of odd mantissas is odd
        return Dyadic._raw(self._m * other._m, self._e + other._e)

    __rmul__ = __mul__

    def __neg__(self) -> Dyadic:
        charge(1)
        return Dyadic._raw(-self._m, self._e)

    def __pos__(self) -> Dyadic:
        return self

    def __abs__(self) -> Dyadic:
        charge(1)
        return self if self._m >= 0 else Dyadic._raw(-self._m, self._e)

    def _cmp(self, other: Dyadic) -> int:
        if self._m == other._m and self._e == other._e:
            charge(1)
            return 0
        a, b, _ = self._aligned(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self._m == other._m and self._e == other._e
        if isinstance(other, int):
            return self._e >= 0 and (self._m << self._e) == other
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other):
        other = _coerce(other)
        return other if other is NotImplemented else self._cmp(other) < 0

    def __le__(self, other):
        other = _coerce(other)
        return other if other is NotImplemented else self._cmp(other) <= 0

    def __gt__(self, other):
        other = _coerce(other)
        return other if other is NotImplemented else self._cmp(other) > 0

    def __ge__(self, other):
        other = _coerce(other)
        return other if other is NotImplemented else self._cmp(other) >= 0

    def __bool__(self) -> bool:
        return self._m != 0

    def __floor__(self) -> int:
        return floor(self)

    def __repr__(self) -> str:
        return f"Dyadic({to_string(self)!r})"

    def __str__(self) -> str:
        return to_string(self)

    def __reduce__(self):
        return (Dyadic, (self._m, self._e))


ZERO = Dyadic._raw(0, 0)
ONE = Dyadic._raw(1, 0)
HALF = Dyadic._raw(1, -1)

DyadicLike = Union[Dyadic, int, str, Fraction]


def _coerce(value) -> Dyadic:
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Dyadic(value)
    if isinstance(value, Fraction):
        return Dyadic.from_fraction(value)
    return NotImplemented


def dyadic(value: DyadicLike) -> Dyadic:
    """Convert ints, dyadic Fractions and Sigma-literals to :class:`Dyadic`."""
    if isinstance(value, str):
        return dyadic_from_string(value)
    result = _coerce(value)
    if result is NotImplemented:
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")
    return result


# -- literal syntax ---------------------------------------------------------

_LOOSE = re.compile(r"-?[01]+(?:\.[01]+)?")


def dyadic_from_string(literal: str) -> Dyadic:
    """Parse a lowest-form literal over the alphabet ``0 1 - .``.

    >>> dyadic_from_string("-1.01")
    Dyadic('-1.01')
    """
    if not isinstance(literal, str) or not _LOOSE.fullmatch(literal):
        raise MalformedLiteral(f"not a dyadic literal: {literal!r}")
    negative = literal.startswith("-")
    body = literal[1:] if negative else literal
    int_part, _, frac_part = body.partition(".")
    if len(int_part) > 1 and int_part[0] == "0":
        raise NotLowestForm(f"leading zero in {literal!r}")
    if frac_part and frac_part[-1] == "0":
        raise NotLowestForm(f"trailing fractional zero in {literal!r}")
    if negative and int_part == "0" and not frac_part:
        raise NotLowestForm("negative zero")
    m = int(int_part + frac_part, 2)
    result = Dyadic(-m if negative else m, -len(frac_part))
    charge(limbs(m))
    return result


def to_string(d: Dyadic) -> str:
    m, e = d.mantissa, d.exponent
    sign = "-" if d.signed_mantissa < 0 else ""
    if e >= 0:
        return sign + format(m << e, "b")
    int_part = m >> -e
    frac = m & ((1 << -e) - 1)
    return f"{sign}{int_part:b}.{frac:0{-e}b}"


_TAU = {"0": "00", "1": "11", "-": "01", ".": "10"}
_TAU_INV = {v: k for k, v in _TAU.items()}


def tau_star_encode(d: Dyadic) -> str:
    return "".join(_TAU[c] for c in to_string(d))


def tau_star_decode(bits: str) -> Dyadic:
    if len(bits) % 2:
        raise MalformedLiteral("tau* string must have even length")
    try:
        literal = "".join(_TAU_INV[bits[i:i + 2]] for i in range(0, len(bits), 2))
    except KeyError:
        raise MalformedLiteral(f"not a tau* string: {bits!r}") from None
    return dyadic_from_string(literal)


def length(d: Dyadic) -> int:
    """Length of the tau* encoding: two bits per literal symbol."""
    m, e = d.mantissa, d.exponent
    if m == 0:
        return 2
    symbols = 1 if d.signed_mantissa < 0 else 0
    if e >= 0:
        symbols += m.bit_length() + e
    else:
        int_part = m >> -e
        symbols += max(1, int_part.bit_length()) + 1 + (-e)
    return 2 * symbols


# -- rounding ---------------------------------------------------------------

def floor(d: Dyadic) -> int:
    """Round toward minus infinity."""
    charge(limbs(d.signed_mantissa))
    if d.exponent >= 0:
        return d.signed_mantissa << d.exponent
    return d.signed_mantissa >> -d.exponent


def round_to_precision(d: Dyadic, n: int) -> Dyadic:
    """``floor(2**n * d) / 2**n``, so ``0 <= d - result < 2**-n``."""
    if d.exponent >= -n:
        charge(1)
        return d
    charge(limbs(d.signed_mantissa))
    return Dyadic(d.signed_mantissa >> (-n - d.exponent), -n)


# functional spellings of the operators

def add(a: Dyadic, b: Dyadic) -> Dyadic:
    return a + b


def sub(a: Dyadic, b: Dyadic) -> Dyadic:
    return a - b


def mul(a: Dyadic, b: Dyadic) -> Dyadic:
    return a * b


def neg(a: Dyadic) -> Dyadic:
    return -a


def compare(a: Dyadic, b: Dyadic) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return a._cmp(b)
