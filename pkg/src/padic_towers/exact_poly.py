"""Exact integer polynomial algebra.

Polynomials are stored ascending by degree (constant term first) with no
trailing zeros; the zero polynomial is the empty tuple.  Heavy kernels
(resultants, the root-power transform and cyclic resultants) run on gmpy2
integers and convert back to Python ints at the boundary.
"""

from __future__ import annotations

import math
from functools import lru_cache, reduce

import gmpy2
from gmpy2 import mpz

from .errors import DomainError, PrecisionError

#: default cap on the decimal size of an exact cyclic resultant
DEFAULT_DIGIT_BUDGET = 10**7


# ---------------------------------------------------------------------------
# small integer helpers
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return bool(gmpy2.is_prime(n, 50))


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer by trial division."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    result = n
    for q in factorize(n):
        result = result // q * (q - 1)
    return result


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise DomainError("valuation of zero is infinite")
    return int(gmpy2.remove(mpz(n), p)[1])


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not a prime")


# ---------------------------------------------------------------------------
# the polynomial type
# ---------------------------------------------------------------------------

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


class IntPolynomial:
    """Immutable polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in _trim(coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls([c])

    # basic queries -------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r})"

    def __str__(self):
        return format_polynomial(self)

    def __call__(self, x):
        return evaluate(self, x)

    # ring operations -----------------------------------------------------
    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self), len(other))
        return IntPolynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        return IntPolynomial(_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = IntPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod_exact(self, other: "IntPolynomial"):
        """Quotient and remainder over Z; the divisor must be monic up to sign."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.leading not in (1, -1):
            raise DomainError("divisor must have leading coefficient +-1")
        q, r = _divmod_unit(list(self.coeffs), list(other.coeffs))
        return IntPolynomial(q), IntPolynomial(r)

    def exact_quotient(self, other: "IntPolynomial") -> "IntPolynomial":
        """Exact division over Z (any nonzero divisor); raises if not exact."""
        q, r = _divmod_field_exact(list(self.coeffs), list(other.coeffs))
        if r:
            raise DomainError(f"{other} does not divide {self}")
        return IntPolynomial(q)

    def taylor_shift(self, a: int = 1) -> "IntPolynomial":
        """Return f(t + a)."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return IntPolynomial(c)

    def reversed(self) -> "IntPolynomial":
        """t^deg f(1/t) for a polynomial with nonzero constant term."""
        return IntPolynomial(self.coeffs[::-1])

    def content(self) -> int:
        return int(reduce(gmpy2.gcd, self.coeffs, mpz(0)))

    def reduce_mod(self, m: int) -> "IntPolynomial":
        return IntPolynomial([c % m for c in self.coeffs])


def _as_poly(x) -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    if isinstance(x, int):
        return IntPolynomial([x])
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


def _mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divmod_unit(a, b):
    """Division by a polynomial whose leading coefficient is +-1."""
    a = _trim(a)
    b = _trim(b)
    lb = b[-1]
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * lb  # lb = +-1 is its own inverse
        q[k] = c
        if c:
            for i in range(db + 1):
                a[k + i] -= c * b[i]
    return _trim(q), _trim(a[:db])


def _divmod_field_exact(a, b):
    """Long division over Q that insists on integral quotient digits."""
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lb = b[-1]
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        top = a[k + db]
        if top % lb:
            return q, a  # not exact; caller checks remainder
        c = top // lb
        q[k] = c
        if c:
            for i in range(db + 1):
                a[k + i] -= c * b[i]
    return _trim(q), _trim(a[:db])


# ---------------------------------------------------------------------------
# formatting (the grammar itself lives in the cli parser)
# ---------------------------------------------------------------------------

def format_polynomial(f: IntPolynomial, var: str = "t") -> str:
    if f.is_zero():
        return "0"
    parts = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += sign + body
    return text


# ---------------------------------------------------------------------------
# evaluation and content
# ---------------------------------------------------------------------------

def evaluate(f: IntPolynomial, x: int) -> int:
    """Exact value f(x) by Horner's rule."""
    acc = mpz(0)
    x = mpz(x)
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return int(acc)


def p_content(f: IntPolynomial, p: int) -> int:
    """Largest mu with p^mu dividing every coefficient."""
    if f.is_zero():
        raise DomainError("p-content of the zero polynomial is undefined")
    return min(valuation(c, p) for c in f.coeffs if c)


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def _prem(a, b):
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for i in range(db + 1):
            r[i + shift] -= c * b[i]
        r = _trim(r)
        e -= 1
    if e > 0:
        m = lb**e
        r = [m * x for x in r]
    return r


def _content(c):
    return reduce(gmpy2.gcd, c, mpz(0))


def _subresultant(a, b):
    """Resultant of two nonzero coefficient lists (ascending, mpz entries)."""
    if not a or not b:
        return mpz(0)
    ca, cb = _content(a), _content(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    da, db = len(a) - 1, len(b) - 1
    t = ca**db * cb**da
    s = 1
    if da < db:
        a, b = b, a
        if da % 2 and db % 2:
            s = -1
    g = h = mpz(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            # b is a nonzero constant
            if da == 0:
                return s * t
            return s * t * (b[0] ** da // h ** (da - 1))
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return mpz(0)
        a = b
        div = g * h**delta
        b = [x // div for x in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) = lc(f)^deg g * prod_{f(a)=0} g(a), by the subresultant PRS."""
    if f.is_zero() or g.is_zero():
        raise DomainError("resultant with the zero polynomial is rejected")
    return int(_subresultant([mpz(x) for x in f.coeffs], [mpz(x) for x in g.coeffs]))


def bareiss_determinant(matrix) -> int:
    """Fraction-free Gaussian elimination on a square integer matrix."""
    m = [[mpz(x) for x in row] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return int(sign * m[n - 1][n - 1])


def sylvester_matrix(f: IntPolynomial, g: IntPolynomial):
    df, dg = f.degree, g.degree
    size = df + dg
    rows = []
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    for i in range(dg):
        rows.append([0] * i + fd + [0] * (size - df - 1 - i))
    for i in range(df):
        rows.append([0] * i + gd + [0] * (size - dg - 1 - i))
    return rows


def sylvester_resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Determinant of the Sylvester matrix; slow, used as an independent check."""
    if f.is_zero() or g.is_zero():
        raise DomainError("resultant with the zero polynomial is rejected")
    if f.degree == 0:
        return f.coeffs[0] ** g.degree
    if g.degree == 0:
        return g.coeffs[0] ** f.degree
    return bareiss_determinant(sylvester_matrix(f, g))


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPolynomial:
    """Phi_m by exact division of t^m - 1 by the lower cyclotomic factors."""
    if m < 1:
        raise DomainError(f"cyclotomic index must be positive, got {m}")
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        q, r = _divmod_unit(num, list(cyclotomic(d).coeffs))
        assert not r
        num = q
    return IntPolynomial(num)


def cyclotomic_multiplicity(f: IntPolynomial, m: int) -> int:
    """Largest k with Phi_m^k dividing f over Z."""
    if f.is_zero():
        raise DomainError("multiplicity in the zero polynomial is unbounded")
    phi = cyclotomic(m)
    k = 0
    cur = list(f.coeffs)
    while len(cur) - 1 >= phi.degree:
        q, r = _divmod_unit(cur, list(phi.coeffs))
        if r:
            break
        cur = q
        k += 1
    return k


def vanishing_divisor(f: IntPolynomial, n: int):
    """Smallest d | n with Phi_d | f (so Res(t^n - 1, f) = 0), else None."""
    if f.is_zero():
        raise DomainError("zero polynomial")
    for d in divisors(n):
        if euler_phi(d) <= f.degree and cyclotomic_multiplicity(f, d):
            return d
    return None


# ---------------------------------------------------------------------------
# root-power transform and cyclic resultants
# ---------------------------------------------------------------------------

def _interpolate_integer(values):
    """Integer polynomial through (0, v0), ..., (d, vd); exact Newton form."""
    d = len(values) - 1
    diffs = list(values)
    newton = []
    fact = 1
    for k in range(d + 1):
        if k:
            fact *= k
        top = diffs[0]
        q, r = divmod(top, fact)
        if r:
            raise ArithmeticError("interpolation data is not an integer polynomial")
        newton.append(q)
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    # Horner in the falling-factorial basis: P = b0 + x(b1 + (x-1)(b2 + ...))
    poly = [newton[d]]
    for k in range(d - 1, -1, -1):
        shifted = [0] + poly  # x * poly
        for i, c in enumerate(poly):
            shifted[i] -= k * c  # (x - k) * poly
        shifted[0] += newton[k]
        poly = shifted
    return _trim(poly)


def _power_transform_list(c, m):
    d = len(c) - 1
    if m == 1 or d < 0:
        return list(c)
    if d == 0:
        return [c[0] ** m]
    values = []
    for node in range(d + 1):
        g = [mpz(node)] + [mpz(0)] * (m - 1) + [mpz(-1)]
        values.append(_subresultant(c, g))
    out = _interpolate_integer(values)
    if len(out) != d + 1 or out[-1] != c[-1] ** m:
        raise ArithmeticError("power transform lost its leading coefficient")
    return out


def power_transform(f: IntPolynomial, m: int) -> IntPolynomial:
    """a0^m * prod (t - alpha_i^m), i.e. Res_x(f(x), t - x^m) as a polynomial in t."""
    if f.is_zero():
        raise DomainError("power transform of the zero polynomial")
    if m < 1:
        raise DomainError("power must be positive")
    c = [mpz(x) for x in f.coeffs]
    for q, e in factorize(m).items():
        for _ in range(e):
            c = _power_transform_list(c, q)
    return IntPolynomial(c)


def estimated_digits(f: IntPolynomial, n: int) -> int:
    """Upper bound on the decimal digits of Res(t^n - 1, f)."""
    norm1 = sum(abs(c) for c in f.coeffs)
    return int(n * math.log10(max(norm1, 2))) + 1


def _check_budget(f, n, budget):
    if budget is None:
        budget = DEFAULT_DIGIT_BUDGET
    est = estimated_digits(f, n)
    if est > budget:
        raise PrecisionError(
            f"Res(t^{n}-1, f) needs about {est} digits, over the budget of {budget}"
        )


def _signed_value_at_one(c, n, d):
    # Res(t^n - 1, f) = (-1)^((n+1) deg f) * power_transform(f, n)(1)
    v = sum(c, mpz(0))
    return -v if ((n + 1) * d) % 2 else v


def cyclic_resultant(f: IntPolynomial, n: int, budget: int | None = None) -> int:
    """Res(t^n - 1, f) = prod over n-th roots of unity of f(zeta); may be 0."""
    if f.is_zero():
        raise DomainError("cyclic resultant of the zero polynomial")
    if n < 1:
        raise DomainError("n must be positive")
    if n == 1:
        return evaluate(f, 1)
    _check_budget(f, n, budget)
    c = [mpz(x) for x in f.coeffs]
    for q, e in factorize(n).items():
        for _ in range(e):
            c = _power_transform_list(c, q)
    return int(_signed_value_at_one(c, n, f.degree))


def cyclic_resultant_sequence(f: IntPolynomial, p: int, levels: int,
                              budget: int | None = None, start_power: int = 1) -> list[int]:
    """[Res(t^(s p^k) - 1, f) for k = 0..levels] along one Graeffe chain, s = start_power."""
    if f.is_zero():
        raise DomainError("cyclic resultant of the zero polynomial")
    require_prime(p)
    _check_budget(f, start_power * p**levels, budget)
    d = f.degree
    c = _power_transform_list([mpz(x) for x in f.coeffs], 1)
    for q, e in factorize(start_power).items():
        for _ in range(e):
            c = _power_transform_list(c, q)
    out = []
    n = start_power
    for k in range(levels + 1):
        if k:
            c = _power_transform_list(c, p)
            n *= p
        out.append(int(_signed_value_at_one(c, n, d)))
    return out


def cyclic_resultant_sign(f: IntPolynomial, n: int) -> int:
    """Sign of a nonzero Res(t^n - 1, f) without computing it.

    Every block of non-real conjugate roots of unity contributes a norm, which
    is positive, so only f(1) and (for even n) f(-1) matter.
    """
    f1 = evaluate(f, 1)
    value = f1 * evaluate(f, -1) if n % 2 == 0 else f1
    if value == 0:
        raise DomainError(f"Res(t^{n}-1, f) vanishes")
    return 1 if value > 0 else -1
