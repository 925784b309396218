"""Finite-precision p-adic scalars, Teichmuller lifts, the p-adic logarithm
and Newton polygons of integer polynomials.

A nonzero :class:`PadicScalar` stands for ``unit * p**valuation`` known modulo
``p**(valuation + precision)``; ``precision`` counts significant unit digits
(relative precision).  A value that is zero to the available precision is the
*zero marker*: ``unit == 0`` and ``valuation`` is the absolute bound, i.e. the
value is only known to be divisible by ``p**valuation``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import gmpy2
from gmpy2 import mpz

from .errors import DomainError, PrecisionError
from .exact_poly import IntPolynomial, require_prime, valuation

#: default number of significant base-p digits
DEFAULT_PRECISION = 8
#: extra digits carried internally by the engines
GUARD_DIGITS = 4


def _split(x: int, p: int):
    """(valuation, unit) of a nonzero integer."""
    u, v = gmpy2.remove(mpz(x), p)
    return int(v), u


@dataclass(frozen=True)
class PadicScalar:
    p: int
    precision: int
    valuation: int
    unit: int

    def __post_init__(self):
        if self.unit == 0:
            if self.precision != 0:
                raise DomainError("zero marker carries no relative precision")
            return
        if self.precision <= 0:
            raise DomainError("nonzero p-adic value needs positive precision")
        if self.unit % self.p == 0:
            raise DomainError("unit part must be prime to p")
        if not 0 < self.unit < self.p**self.precision:
            object.__setattr__(self, "unit", int(self.unit % self.p**self.precision))

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, p: int, absolute: int) -> "PadicScalar":
        return cls(p, 0, absolute, 0)

    @classmethod
    def from_int(cls, x: int, p: int, absolute: int) -> "PadicScalar":
        """Integer known modulo p**absolute."""
        x = int(x) % p**absolute if absolute >= 0 else int(x)
        if x == 0:
            return cls.zero(p, absolute)
        v, u = _split(x, p)
        return cls(p, absolute - v, v, int(u % p ** (absolute - v)))

    @classmethod
    def exact(cls, x: int, p: int, precision: int) -> "PadicScalar":
        """An exactly known rational integer, carried with `precision` unit digits."""
        return from_rational(x, 1, p, precision)

    # queries ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absolute_precision(self) -> int:
        return self.valuation + self.precision

    def residue(self, k: int) -> int:
        """Representative in [0, p^k) of the value mod p^k (needs valuation >= 0)."""
        if k > self.absolute_precision:
            raise PrecisionError(
                f"only {self.absolute_precision} digits known, {k} requested",
                self.absolute_precision,
            )
        if self.is_zero() or self.valuation >= k:
            return 0
        if self.valuation < 0:
            raise DomainError("value is not a p-adic integer")
        return (self.unit * self.p**self.valuation) % self.p**k

    def signed_residue(self, k: int) -> int:
        """Residue mod p^k in the symmetric range (-p^k/2, p^k/2]."""
        r = self.residue(k)
        m = self.p**k
        return r - m if r > m // 2 else r

    def unit_digits(self) -> list[int]:
        """Base-p digits of the unit part, little-endian, `precision` of them."""
        u = self.unit
        out = []
        for _ in range(self.precision):
            u, d = divmod(u, self.p)
            out.append(int(d))
        return out

    def with_precision(self, precision: int) -> "PadicScalar":
        """Truncate to fewer relative digits."""
        if self.is_zero():
            return self
        if precision > self.precision:
            raise PrecisionError(
                f"cannot raise precision from {self.precision} to {precision}", self.precision
            )
        return PadicScalar(self.p, precision, self.valuation, self.unit % self.p**precision)

    def agreement(self, other: "PadicScalar") -> int:
        """Absolute digits on which two values agree (capped by the shared precision)."""
        cap = min(self.absolute_precision, other.absolute_precision)
        diff = self - other
        if diff.is_zero():
            return cap
        return min(cap, diff.valuation)

    def __repr__(self):
        if self.is_zero():
            return f"PadicScalar(0 mod {self.p}^{self.valuation})"
        return (f"PadicScalar({self.unit}*{self.p}^{self.valuation} "
                f"+ O({self.p}^{self.absolute_precision}))")

    # arithmetic ------------------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return PadicScalar.exact(other, self.p, max(self.precision, 1) + 64)
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if other.p != self.p:
            raise DomainError("p-adic values with different primes")
        return other

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicScalar(self.p, self.precision, self.valuation,
                           (-self.unit) % self.p**self.precision)

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        other = self._check(other)
        return add(other, -self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return div(self, other)

    def __rtruediv__(self, other):
        other = self._check(other)
        return div(other, self)

    def __pow__(self, k: int):
        if k < 0:
            return div(PadicScalar.exact(1, self.p, self.precision), self ** (-k))
        if self.is_zero():
            return PadicScalar.zero(self.p, self.valuation * k) if k else PadicScalar.exact(1, self.p, 1)
        return PadicScalar(self.p, self.precision, self.valuation * k,
                           pow(self.unit, k, self.p**self.precision))


def from_rational(numerator: int, denominator: int, p: int, N: int) -> PadicScalar:
    """numerator/denominator with N significant unit digits."""
    if denominator == 0:
        raise DomainError("zero denominator")
    require_prime(p)
    if numerator == 0:
        return PadicScalar.zero(p, N)
    vn, un = _split(numerator, p)
    vd, ud = _split(denominator, p)
    mod = p**N
    u = int(un * gmpy2.invert(ud % mod, mod) % mod)
    return PadicScalar(p, N, vn - vd, u)


def add(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    p = x.p
    A = min(x.absolute_precision, y.absolute_precision)
    if x.is_zero() and y.is_zero():
        return PadicScalar.zero(p, A)
    vs = [z.valuation for z in (x, y) if not z.is_zero()]
    v = min(vs)
    if A <= v:
        return PadicScalar.zero(p, A)
    total = 0
    for z in (x, y):
        if not z.is_zero():
            total += z.unit * p ** (z.valuation - v)
    total %= p ** (A - v)
    if total == 0:
        return PadicScalar.zero(p, A)
    w, u = _split(total, p)
    prec = A - v - w
    return PadicScalar(p, prec, v + w, int(u % p**prec))


def mul(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    p = x.p
    if x.is_zero() or y.is_zero():
        if x.is_zero() and y.is_zero():
            return PadicScalar.zero(p, x.valuation + y.valuation)
        z, other = (x, y) if x.is_zero() else (y, x)
        return PadicScalar.zero(p, z.valuation + other.valuation)
    prec = min(x.precision, y.precision)
    return PadicScalar(p, prec, x.valuation + y.valuation,
                       (x.unit * y.unit) % p**prec)


def div(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    p = x.p
    if y.is_zero():
        raise PrecisionError(
            f"division by a value that vanishes mod {p}^{y.valuation}", y.valuation
        )
    if x.is_zero():
        return PadicScalar.zero(p, x.valuation - y.valuation)
    prec = min(x.precision, y.precision)
    mod = p**prec
    return PadicScalar(p, prec, x.valuation - y.valuation,
                       int(x.unit * gmpy2.invert(y.unit % mod, mod) % mod))


# ---------------------------------------------------------------------------
# Teichmuller representatives and the logarithm
# ---------------------------------------------------------------------------

def teichmuller_residue(x: int, p: int, N: int) -> int:
    """Teichmuller lift of a unit x, as a residue mod p^N."""
    mod = p**N
    y = x % mod
    if y % p == 0:
        raise DomainError("Teichmuller lift needs a unit")
    # each p-th power gains one correct digit
    for _ in range(N):
        y = pow(y, p, mod)
    return int(y)


def teichmuller(x: PadicScalar) -> PadicScalar:
    """The root of unity of order prime to p congruent to x mod p."""
    if x.is_zero() or x.valuation != 0:
        raise DomainError("Teichmuller lift is defined for units only")
    return PadicScalar(x.p, x.precision, 0, teichmuller_residue(x.unit, x.p, x.precision))


def log_terms_needed(w: Fraction, p: int, target: Fraction) -> int:
    """Smallest M with n*w - v_p(n) >= target for every n > M."""
    if w <= 0:
        raise DomainError("logarithm series needs a positive valuation")
    # n*w - log_p(n) bounds the term valuation and increases once n >= 1/(w ln p)
    n = max(2, math.ceil(1 / (float(w) * math.log(p))) + 1)
    while float(n * w - target) - math.log(n, p) < 1e-9:
        n += 1
    failing = [k for k in range(1, n) if k * w - valuation(k, p) < target]
    return max(failing, default=1)


def padic_log(x: PadicScalar) -> PadicScalar:
    """log(1 + e) = sum_{n>=1} (-1)^(n+1) e^n / n for x = 1 + e with p | e."""
    p = x.p
    if x.is_zero() or x.valuation != 0:
        raise DomainError("p-adic log needs a unit argument")
    A = x.absolute_precision
    e = (x.unit - 1) % p**A
    if e % p:
        raise DomainError("p-adic log needs x = 1 mod p")
    if e == 0:
        return PadicScalar.zero(p, A)
    w = valuation(e, p)
    M = log_terms_needed(Fraction(w), p, Fraction(A))
    total = _log_series_mod(e, p, A, M)
    return PadicScalar.from_int(total, p, A)


def _log_series_mod(e: int, p: int, A: int, M: int) -> int:
    """sum_{n=1}^{M} (-1)^(n+1) e^n/n mod p^A for an integer e divisible by p."""
    mod = p**A
    total = mpz(0)
    power = mpz(1)
    big = p ** (A + int(math.log(M, p)) + 2)
    for n in range(1, M + 1):
        power = (power * e) % big
        vn, un = _split(n, p)
        term = (power // p**vn) * gmpy2.invert(un % mod, mod)
        total += term if n % 2 else -term
    return int(total % mod)


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v_p(coefficient of t^(d-i))).

    With this leading-first orientation each segment's slope equals the common
    p-adic valuation of the roots it counts, and its horizontal length is the
    number of those roots.  Roots equal to zero (a zero constant term) are
    listed with valuation ``None`` and counted as positive.
    """

    p: int
    degree: int
    vertices: tuple
    slopes: tuple  # ((valuation as Fraction, multiplicity), ...)
    zero_roots: int

    @property
    def count_neg(self) -> int:
        return sum(m for s, m in self.slopes if s < 0)

    @property
    def count_unit(self) -> int:
        return sum(m for s, m in self.slopes if s == 0)

    @property
    def count_pos(self) -> int:
        return sum(m for s, m in self.slopes if s > 0) + self.zero_roots

    def root_valuations(self) -> list:
        out = []
        for s, m in self.slopes:
            out.extend([s] * m)
        return out + [None] * self.zero_roots


def lower_hull(points):
    """Lower convex hull of points sorted by abscissa."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_from_valuations(vals, p: int) -> NewtonPolygon:
    """Polygon from valuations listed ascending by degree (None for a zero coefficient)."""
    d = len(vals) - 1
    points = [(i, vals[d - i]) for i in range(d + 1) if vals[d - i] is not None]
    if not points or points[0][0] != 0:
        raise DomainError("leading coefficient must be nonzero")
    hull = lower_hull(points)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    zero_roots = d - hull[-1][0]
    return NewtonPolygon(p, d, tuple(hull), tuple(slopes), zero_roots)


def newton_polygon(f: IntPolynomial, p: int) -> NewtonPolygon:
    if f.is_zero():
        raise DomainError("Newton polygon of the zero polynomial")
    require_prime(p)
    vals = [valuation(c, p) if c else None for c in f.coeffs]
    return newton_polygon_from_valuations(vals, p)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def digits_render(x: PadicScalar, n_digits: int) -> tuple[str, list[int]]:
    """Residue mod p^n_digits as a decimal string plus base-p digits (little-endian)."""
    if x.is_zero():
        if n_digits > x.valuation:
            raise PrecisionError(
                f"value is only known to vanish mod {x.p}^{x.valuation}", x.valuation
            )
        return "0", [0] * n_digits
    r = x.residue(n_digits)
    digits = []
    u = r
    for _ in range(n_digits):
        u, d = divmod(u, x.p)
        digits.append(int(d))
    return str(r), digits
