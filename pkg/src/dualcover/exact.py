"""Exact scalars: rationals, sums of rational square roots, and complex pairs.

Every quantity in this package is either a :class:`fractions.Fraction`, a
:class:`Surd` (a finite sum ``c_1*sqrt(r_1) + ... + c_k*sqrt(r_k)`` with
rational ``c_i, r_i``), or a ``float`` when a run is explicitly approximate.
Surds appear as soon as a complex kernel is involved, because ``|z|`` of a
Gaussian rational is generally irrational.

Square roots of rationals whose pairwise ratios are not rational squares are
linearly independent over the rationals, so a normalized non-empty surd is
never zero. Signs are decided by a float filter, then by repeated squaring
(up to four radicals), then by interval arithmetic for anything larger.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from mpmath import iv

__all__ = [
    "TOL",
    "Surd",
    "ComplexPair",
    "Scalar",
    "sqrt",
    "as_fraction",
    "parse_scalar",
    "format_scalar",
    "is_exact",
    "le",
    "lt",
    "eq",
    "ceil_ratio",
    "magnitude",
    "magnitude_sq",
    "smax",
]

TOL = 1e-9
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_iv_lock = threading.Lock()


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    sn, sd = math.isqrt(n), math.isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None


def _reduce(r: Fraction) -> tuple[Fraction, int]:
    """Write sqrt(r) as factor*sqrt(m) with m a positive integer."""
    m = r.numerator * r.denominator
    factor = Fraction(1, r.denominator)
    s = math.isqrt(m)
    if s * s == m:
        return factor * s, 1
    for p in _SMALL_PRIMES:
        pp = p * p
        while m % pp == 0:
            m //= pp
            factor *= p
    return factor, m


def _collect(pairs) -> tuple[tuple[int, Fraction], ...]:
    slots: list[list] = []
    for r, c in pairs:
        if c == 0 or r == 0:
            continue
        f, rad = _reduce(Fraction(r))
        c = Fraction(c) * f
        for slot in slots:
            k = _rational_sqrt(Fraction(rad, slot[0]))
            if k is not None:
                slot[1] += c * k
                break
        else:
            slots.append([rad, c])
    return tuple(sorted((r, c) for r, c in slots if c != 0))


def _from_terms(pairs) -> Union[Fraction, "Surd"]:
    terms = _collect(pairs)
    if not terms:
        return Fraction(0)
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return Surd._raw(terms)


def _square(terms):
    out = []
    for i, (r1, c1) in enumerate(terms):
        out.append((Fraction(r1 * r1), c1 * c1))
        for r2, c2 in terms[i + 1:]:
            out.append((Fraction(r1 * r2), 2 * c1 * c2))
    return out


def _interval_sign(terms) -> int:
    with _iv_lock:
        old = iv.prec
        prec = 128
        try:
            while True:
                iv.prec = prec
                total = iv.mpf(0)
                for r, c in terms:
                    total += iv.mpf(c.numerator) / c.denominator * iv.sqrt(r)
                if total.a > 0:
                    return 1
                if total.b < 0:
                    return -1
                prec *= 2
        finally:
            iv.prec = old


def _exact_sign(terms) -> int:
    if not terms:
        return 0
    if len(terms) == 1:
        return 1 if terms[0][1] > 0 else -1
    if len(terms) > 4:
        return _interval_sign(terms)
    half = len(terms) // 2
    a, b = terms[:half], terms[half:]
    sa, sb = _exact_sign(a), _exact_sign(b)
    if sa == sb:
        return sa
    # A and B have opposite signs: sign(A + B) = sign(A) * sign(A^2 - B^2)
    diff = _collect(_square(a) + [(r, -c) for r, c in _square(b)])
    return sa * _exact_sign(diff)


def _sign(terms) -> int:
    if not terms:
        return 0
    try:
        approx = math.fsum(float(c) * math.sqrt(r) for r, c in terms)
        mag = math.fsum(abs(float(c)) * math.sqrt(r) for r, c in terms)
    except OverflowError:
        return _exact_sign(terms)
    if abs(approx) > 1e-9 * mag:
        return 1 if approx > 0 else -1
    return _exact_sign(terms)


def _terms_of(x):
    if isinstance(x, Surd):
        return x._terms
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return ((1, Fraction(x)),) if x != 0 else ()
    return None


class Surd:
    """Exact real number ``sum(c * sqrt(r))`` over normalized (r, c) terms.

    Instances are only created when at least one irrational radical is
    present; purely rational results come back as ``Fraction``.
    """

    __slots__ = ("_terms",)
    __hash__ = None  # equal values may have different representations

    @classmethod
    def _raw(cls, terms) -> "Surd":
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def __float__(self) -> float:
        return math.fsum(float(c) * math.sqrt(r) for r, c in self._terms)

    def __repr__(self) -> str:
        return f"Surd({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def sign(self) -> int:
        return _sign(self._terms)

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return Surd._raw(tuple((r, -c) for r, c in self._terms))

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __add__(self, other):
        t = _terms_of(other)
        if t is None:
            if isinstance(other, float):
                return float(self) + other
            return NotImplemented
        return _from_terms(self._terms + t)

    __radd__ = __add__

    def __sub__(self, other):
        t = _terms_of(other)
        if t is None:
            if isinstance(other, float):
                return float(self) - other
            return NotImplemented
        return _from_terms(self._terms + tuple((r, -c) for r, c in t))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        t = _terms_of(other)
        if t is None:
            if isinstance(other, float):
                return float(self) * other
            return NotImplemented
        return _from_terms(
            (Fraction(r1 * r2), c1 * c2) for r1, c1 in self._terms for r2, c2 in t
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        t = _terms_of(other)
        if t is None:
            return NotImplemented
        if len(t) != 1:
            raise TypeError("division is only supported by single-radical values")
        (r, c), = t
        if c == 0:
            raise ZeroDivisionError("division by zero")
        # 1/(c*sqrt(r)) = sqrt(r)/(c*r)
        return self * _from_terms([(Fraction(r), 1 / (c * r))])

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        t = _terms_of(other)
        if t is None:
            return NotImplemented
        if len(self._terms) != 1:
            raise TypeError("division is only supported by single-radical values")
        (r, c), = self._terms
        return _from_terms(t) * _from_terms([(Fraction(r), 1 / (c * r))])

    # comparisons --------------------------------------------------------
    def _cmp(self, other) -> int:
        if isinstance(other, float):
            s = float(self)
            return (s > other) - (s < other)
        t = _terms_of(other)
        if t is None:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        return _sign(_collect(self._terms + tuple((r, -c) for r, c in t)))

    def __eq__(self, other):
        if _terms_of(other) is None and not isinstance(other, float):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


Scalar = Union[Fraction, Surd, float]


@dataclass(frozen=True)
class ComplexPair:
    """Complex number stored as a (re, im) pair of exact or float scalars."""

    re: Scalar
    im: Scalar = Fraction(0)

    def __add__(self, other: "ComplexPair") -> "ComplexPair":
        other = _as_pair(other)
        return ComplexPair(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexPair") -> "ComplexPair":
        other = _as_pair(other)
        return ComplexPair(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexPair":
        return ComplexPair(-self.re, -self.im)

    def scale(self, lam) -> "ComplexPair":
        return ComplexPair(self.re * lam, self.im * lam)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return sqrt(self.abs2())


def _as_pair(x) -> ComplexPair:
    return x if isinstance(x, ComplexPair) else ComplexPair(x, Fraction(0))


def sqrt(q):
    """Exact square root of a non-negative rational (Fraction or Surd result)."""
    if isinstance(q, float):
        return math.sqrt(q)
    if isinstance(q, Surd):
        raise TypeError("sqrt of an irrational value is not representable")
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt of a negative number")
    root = _rational_sqrt(q)
    if root is not None:
        return root
    return _from_terms([(q, Fraction(1))])


def is_exact(x) -> bool:
    return not isinstance(x, float)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


def parse_scalar(text, *, allow_float: bool = False) -> Scalar:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    Floats (JSON numbers with a fractional part or strings like ``"0.5"``)
    are rejected unless ``allow_float`` is set, in which case every value is
    returned as a float.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a number: {text!r}")
    if allow_float:
        try:
            if isinstance(text, str) and "/" in text:
                return float(Fraction(text.strip()))
            return float(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a number: {text!r}") from None
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"float {text!r} given without approximate mode")
    if isinstance(text, str):
        s = text.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            try:
                return Fraction(int(p), int(q))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"{text!r} is not a rational p/q") from None
        try:
            return Fraction(int(s))
        except ValueError:
            raise ValueError(
                f"{text!r} is not of the form p/q (floats need approximate mode)"
            ) from None
    raise ValueError(f"not a number: {text!r}")


def format_scalar(x):
    """JSON-friendly rendering: 'p/q' strings for exact values, floats as-is."""
    if isinstance(x, float):
        return x
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, Surd):
        parts = []
        for r, c in x.terms:
            if r == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({r})")
            elif c == -1:
                parts.append(f"-sqrt({r})")
            else:
                parts.append(f"{c}*sqrt({r})")
        return " + ".join(parts).replace("+ -", "- ")
    if isinstance(x, ComplexPair):
        return [format_scalar(x.re), format_scalar(x.im)]
    raise TypeError(f"cannot format {type(x).__name__}")


def le(a, b) -> bool:
    """``a <= b``; exact unless a float is involved, then with tolerance TOL."""
    if isinstance(a, float) or isinstance(b, float):
        return float(a) <= float(b) + TOL
    return a <= b


def lt(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return float(a) < float(b) - TOL
    return a < b


def eq(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return abs(float(a) - float(b)) <= TOL
    return a == b


def smax(values):
    """Maximum of a non-empty iterable of scalars (first maximum wins)."""
    it = iter(values)
    best = next(it)
    for v in it:
        if v > best:
            best = v
    return best


def ceil_ratio(x, y) -> int:
    """Smallest integer k with k >= x/y, for y > 0."""
    if isinstance(x, float) or isinstance(y, float):
        return math.ceil(float(x) / float(y) - TOL)
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return math.ceil(Fraction(x) / Fraction(y))
    k = math.ceil(float(x) / float(y))
    while k * y < x:
        k += 1
    while (k - 1) * y >= x:
        k -= 1
    return k


def magnitude_sq(z):
    if isinstance(z, ComplexPair):
        return z.abs2()
    return z * z


def magnitude(z):
    if isinstance(z, ComplexPair):
        return abs(z)
    return abs(z)
