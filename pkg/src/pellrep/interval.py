"""Certified real arithmetic: intervals with directed MPFR rounding.

``CertifiedReal`` stores a lower and an upper endpoint, each an ``mpfr`` at
the working precision, and guarantees that the exact value it models lies
between them.  Every operation rounds the lower endpoint down and the upper
endpoint up, so enclosures are sound by construction; transcendental
functions (exp, log, sqrt, powers) always return two-sided enclosures and
never rely on faithful rounding.

Comparisons are *certified*: ``a < b`` answers only when the two intervals
are disjoint and raises :class:`InsufficientPrecision` otherwise, so a
caller can retry at a higher precision instead of silently trusting an
ambiguous digit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Union

import gmpy2
from gmpy2 import mpfr, mpz

DEFAULT_PRECISION = 256
MAX_PRECISION = 16384

Number = Union["CertifiedReal", int, Fraction]


class InsufficientPrecision(ArithmeticError):
    """An interval was too wide to certify the requested decision."""


_CTX_CACHE: dict[tuple[int, object], object] = {}


def _ctx(prec: int, rounding):
    key = (prec, rounding)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = gmpy2.context(precision=prec, round=rounding)
        _CTX_CACHE[key] = ctx
    return ctx


def _down(prec: int):
    return _ctx(prec, gmpy2.RoundDown)


def _up(prec: int):
    return _ctx(prec, gmpy2.RoundUp)


def _near(prec: int):
    return _ctx(prec, gmpy2.RoundToNearest)


_ZERO = mpfr(0)


class CertifiedReal:
    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: mpfr, hi: mpfr, prec: int):
        if not (gmpy2.is_finite(lo) and gmpy2.is_finite(hi)):
            raise ValueError("endpoints must be finite")
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # ---------------------------------------------------------------- make

    @classmethod
    def from_int(cls, v: int, prec: int = DEFAULT_PRECISION) -> "CertifiedReal":
        lo = _down(prec).add(mpz(v), _ZERO)
        hi = _up(prec).add(mpz(v), _ZERO)
        return cls(lo, hi, prec)

    @classmethod
    def from_fraction(cls, f: Fraction, prec: int = DEFAULT_PRECISION) -> "CertifiedReal":
        p, q = f.numerator, f.denominator
        lo = _down(prec).div(mpz(p), mpz(q))
        hi = _up(prec).div(mpz(p), mpz(q))
        return cls(lo, hi, prec)

    @classmethod
    def exact(cls, x: mpfr, prec: int) -> "CertifiedReal":
        """Point interval around an mpfr that is taken to be exact."""
        return cls(x, x, prec)

    @classmethod
    def from_center_radius(cls, center: mpfr, radius: mpfr, prec: int) -> "CertifiedReal":
        if radius < 0:
            raise ValueError("negative radius")
        lo = _down(prec).sub(center, radius)
        hi = _up(prec).add(center, radius)
        return cls(lo, hi, prec)

    def _coerce(self, other: Number) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        if isinstance(other, int):
            return CertifiedReal.from_int(other, self.prec)
        if isinstance(other, Fraction):
            return CertifiedReal.from_fraction(other, self.prec)
        return NotImplemented  # type: ignore[return-value]

    # ------------------------------------------------------------ metrics

    @property
    def center(self) -> mpfr:
        n = _near(self.prec)
        return n.div(n.add(self.lo, self.hi), 2)

    @property
    def radius(self) -> mpfr:
        c = self.center
        u = _up(self.prec)
        return max(u.sub(c, self.lo), u.sub(self.hi, c))

    @property
    def width(self) -> mpfr:
        return _up(self.prec).sub(self.hi, self.lo)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def contains(self, other: "CertifiedReal") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "CertifiedReal") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    # ---------------------------------------------------------- arithmetic

    def __neg__(self) -> "CertifiedReal":
        return CertifiedReal(-self.hi, -self.lo, self.prec)

    def __abs__(self) -> "CertifiedReal":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        hi = max(-self.lo, self.hi)
        return CertifiedReal(mpfr(0), hi, self.prec)

    def __add__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        return CertifiedReal(_down(p).add(self.lo, o.lo), _up(p).add(self.hi, o.hi), p)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        return CertifiedReal(_down(p).sub(self.lo, o.hi), _up(p).sub(self.hi, o.lo), p)

    def __rsub__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        d, u = _down(p), _up(p)
        cands_lo = (d.mul(self.lo, o.lo), d.mul(self.lo, o.hi),
                    d.mul(self.hi, o.lo), d.mul(self.hi, o.hi))
        cands_hi = (u.mul(self.lo, o.lo), u.mul(self.lo, o.hi),
                    u.mul(self.hi, o.lo), u.mul(self.hi, o.hi))
        return CertifiedReal(min(cands_lo), max(cands_hi), p)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.contains_zero():
            raise InsufficientPrecision("division by an interval containing zero")
        p = max(self.prec, o.prec)
        d, u = _down(p), _up(p)
        cands_lo = (d.div(self.lo, o.lo), d.div(self.lo, o.hi),
                    d.div(self.hi, o.lo), d.div(self.hi, o.hi))
        cands_hi = (u.div(self.lo, o.lo), u.div(self.lo, o.hi),
                    u.div(self.hi, o.lo), u.div(self.hi, o.hi))
        return CertifiedReal(min(cands_lo), max(cands_hi), p)

    def __rtruediv__(self, other: Number) -> "CertifiedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def exp(self) -> "CertifiedReal":
        p = self.prec
        return CertifiedReal(_down(p).exp(self.lo), _up(p).exp(self.hi), p)

    def log(self) -> "CertifiedReal":
        if self.lo <= 0:
            raise InsufficientPrecision("log of an interval touching (-inf, 0]")
        p = self.prec
        return CertifiedReal(_down(p).log(self.lo), _up(p).log(self.hi), p)

    def sqrt(self) -> "CertifiedReal":
        if self.lo < 0:
            raise InsufficientPrecision("sqrt of an interval below zero")
        p = self.prec
        return CertifiedReal(_down(p).sqrt(self.lo), _up(p).sqrt(self.hi), p)

    def powi(self, n: int) -> "CertifiedReal":
        """Integer power; handles sign splits for even exponents and n < 0."""
        p = self.prec
        if n == 0:
            return CertifiedReal.from_int(1, p)
        if n < 0:
            return CertifiedReal.from_int(1, p) / self.powi(-n)
        d, u = _down(p), _up(p)
        e = mpz(n)
        if n % 2 == 1 or self.lo >= 0:
            return CertifiedReal(d.pow(self.lo, e), u.pow(self.hi, e), p)
        if self.hi <= 0:
            return CertifiedReal(d.pow(self.hi, e), u.pow(self.lo, e), p)
        # even power of a sign-straddling interval
        m = max(-self.lo, self.hi)
        return CertifiedReal(mpfr(0), u.pow(m, e), p)

    def with_precision(self, prec: int) -> "CertifiedReal":
        """Re-round the same enclosure at another working precision (outward)."""
        lo = _down(prec).add(self.lo, _ZERO)
        hi = _up(prec).add(self.hi, _ZERO)
        return CertifiedReal(lo, hi, prec)

    def intersect(self, other: "CertifiedReal") -> "CertifiedReal":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("intersection of disjoint intervals")
        return CertifiedReal(lo, hi, max(self.prec, other.prec))

    # --------------------------------------------------------- comparisons

    def __lt__(self, other: Number) -> bool:
        o = self._coerce(other)
        if self.hi < o.lo:
            return True
        if self.lo >= o.hi:
            return False
        raise InsufficientPrecision(
            f"cannot order overlapping intervals (width {self.width} / {o.width})")

    def __gt__(self, other: Number) -> bool:
        o = self._coerce(other)
        return o.__lt__(self)

    def __le__(self, other: Number) -> bool:
        o = self._coerce(other)
        if self.hi <= o.lo:
            return True
        if self.lo > o.hi:
            return False
        raise InsufficientPrecision("cannot order overlapping intervals")

    def __ge__(self, other: Number) -> bool:
        o = self._coerce(other)
        return o.__le__(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CertifiedReal):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def certainly_less(self, other: Number) -> bool:
        """Non-raising variant of ``<``: False when ambiguous."""
        o = self._coerce(other)
        return self.hi < o.lo

    def certainly_greater(self, other: Number) -> bool:
        o = self._coerce(other)
        return self.lo > o.hi

    # ------------------------------------------------------- integer parts

    def floor(self) -> int:
        """Certified floor; raises when the endpoints disagree."""
        n = _near(self.prec)
        flo = int(n.floor(self.lo))
        fhi = int(n.floor(self.hi))
        if flo != fhi:
            raise InsufficientPrecision(f"floor ambiguous over [{self.lo}, {self.hi}]")
        return flo

    def nearest_int(self) -> tuple[int, "CertifiedReal"]:
        """Nearest integer and a certified enclosure of the distance to it.

        Raises when the interval straddles a half-integer tie or is wide
        enough that two integers compete; the caller should refine and retry.
        """
        n = _near(self.prec)
        m_lo = int(n.rint_round(self.lo))
        m_hi = int(n.rint_round(self.hi))
        if m_lo != m_hi:
            raise InsufficientPrecision("nearest integer ambiguous")
        dist = abs(self - m_lo)
        return m_lo, dist

    # ------------------------------------------------------- serialization

    def to_hex(self) -> tuple[str, str]:
        """(center_hex, radius_hex) pair; re-reading gives a superset interval."""
        return format(self.center, "a"), format(self.radius, "a")

    @classmethod
    def from_hex(cls, center_hex: str, radius_hex: str, prec: int) -> "CertifiedReal":
        c = mpfr(center_hex, prec + 8, base=16)
        r = mpfr(radius_hex, prec + 8, base=16)
        return cls.from_center_radius(c, r, prec)

    def __repr__(self):
        return f"CertifiedReal({self.center!s} ± {self.radius!s}, prec={self.prec})"


# ------------------------------------------------------------------ helpers

def float_up(x) -> float:
    """Smallest double >= x (x an mpfr or CertifiedReal upper endpoint)."""
    if isinstance(x, CertifiedReal):
        x = x.hi
    return float(_up(53).add(x, _ZERO))


def float_down(x) -> float:
    if isinstance(x, CertifiedReal):
        x = x.lo
    return float(_down(53).add(x, _ZERO))


def imin(a: CertifiedReal, b: CertifiedReal) -> CertifiedReal:
    p = max(a.prec, b.prec)
    return CertifiedReal(min(a.lo, b.lo), min(a.hi, b.hi), p)


def imax(a: CertifiedReal, b: CertifiedReal) -> CertifiedReal:
    p = max(a.prec, b.prec)
    return CertifiedReal(max(a.lo, b.lo), max(a.hi, b.hi), p)


def refine(fn: Callable[[int], object], start: int = DEFAULT_PRECISION,
           cap: int = MAX_PRECISION):
    """Run ``fn(prec)`` on a doubling precision ladder until it stops raising
    :class:`InsufficientPrecision`.  The ladder starts at ``start`` bits and
    gives up at ``cap`` bits, re-raising the last signal."""
    prec = start
    while True:
        try:
            return fn(prec)
        except InsufficientPrecision:
            if prec >= cap:
                raise
            prec = min(2 * prec, cap)
