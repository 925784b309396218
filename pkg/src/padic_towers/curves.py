"""Elliptic curves over prime fields and their class-number towers.

For a curve E over F_q with Frobenius polynomial F(t) = t^2 - a t + q, the
degree-zero class number of the constant extension of degree n is
|Res(t^n - 1, F)| = |E(F_{q^n})|.  Counting is brute force (q^n <= 10^4 for
the extension counter), which doubles as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
import functools

from . import exact_poly as ep
from .errors import DomainError, InvariantViolation
from .exact_poly import IntPolynomial
from .limits import LimitReport, compute_limit

MAX_FIELD = 10**4


@dataclass(frozen=True)
class EllipticCurveSpec:
    """y^2 = x^3 + a x + b over F_l, l >= 5 prime."""

    l: int
    a: int
    b: int

    def __post_init__(self):
        if not ep.is_prime(self.l) or self.l < 5:
            raise DomainError(f"base field size must be a prime >= 5, got {self.l}")
        if self.l > MAX_FIELD:
            raise DomainError(f"brute-force counting is limited to l <= {MAX_FIELD}")
        object.__setattr__(self, "a", self.a % self.l)
        object.__setattr__(self, "b", self.b % self.l)
        if (4 * self.a**3 + 27 * self.b**2) % self.l == 0:
            raise DomainError("singular curve: 4a^3 + 27b^2 = 0 mod l")


def legendre_symbol(d: int, l: int) -> int:
    if l < 3 or not ep.is_prime(l):
        raise DomainError("Legendre symbol needs an odd prime")
    r = pow(d % l, (l - 1) // 2, l)
    return -1 if r == l - 1 else r


def point_count(E: EllipticCurveSpec) -> int:
    l = E.l
    # number of square roots of each residue
    roots = [0] * l
    for y in range(l):
        roots[y * y % l] += 1
    n = 1 + sum(roots[(x * x * x + E.a * x + E.b) % l] for x in range(l))
    if (n - l - 1) ** 2 > 4 * l:
        raise InvariantViolation("Hasse bound violated")
    return n


# --- F_{l^k} arithmetic, elements as coefficient tuples mod an irreducible ---

def _poly_mulmod(a, b, modulus, l):
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % l
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k + 1):
                prod[i - k + j] = (prod[i - k + j] - c * modulus[j]) % l
    return tuple(prod[:k])


def _is_irreducible(modulus, l):
    """Monic modulus of degree k is irreducible iff it has no factor of degree <= k/2.

    Checked by brute force over monic candidates; fine at the sizes allowed.
    """
    k = len(modulus) - 1
    for deg in range(1, k // 2 + 1):
        for idx in range(l**deg):
            cand = [(idx // l**i) % l for i in range(deg)] + [1]
            if not _rem_mod(modulus, cand, l):
                return False
    return True


def _rem_mod(a, b, l):
    """Remainder of a by a monic b over F_l, trimmed."""
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % l
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % l
    rem = [x % l for x in a[:db]]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _find_irreducible(k, l):
    for idx in range(l**k):
        cand = [(idx // l**i) % l for i in range(k)] + [1]
        if cand[0] and _is_irreducible(cand, l):
            return cand
    raise InvariantViolation(f"no irreducible polynomial of degree {k} mod {l}")


@functools.lru_cache(maxsize=32)
def _field_tables(l, k):
    """Elements of F_{l^k}, their cubes, and the square-root counts."""
    modulus = _find_irreducible(k, l)
    elems = [tuple((i // l**j) % l for j in range(k)) for i in range(l**k)]
    squares = {}
    for y in elems:
        s = _poly_mulmod(y, y, modulus, l)
        squares[s] = squares.get(s, 0) + 1
    cubes = [_poly_mulmod(_poly_mulmod(x, x, modulus, l), x, modulus, l) for x in elems]
    return elems, cubes, squares


def point_count_extension(E: EllipticCurveSpec, k: int) -> int:
    """|E(F_{l^k})| by enumerating the field; needs l^k <= 10^4."""
    l = E.l
    q = l**k
    if q > MAX_FIELD:
        raise DomainError(f"l^k = {q} exceeds the brute-force limit {MAX_FIELD}")
    if k == 1:
        return point_count(E)
    elems, cubes, squares = _field_tables(l, k)
    a, b = E.a, E.b
    total = 1
    for x, x3 in zip(elems, cubes):
        rhs = ((x3[0] + a * x[0] + b) % l,) + tuple((x3[i] + a * x[i]) % l for i in range(1, k))
        total += squares.get(rhs, 0)
    return total


@dataclass(frozen=True)
class LPolynomialData:
    """L(t) and its reversal F(t) = t^(2g) L(1/t) over F_q."""

    q: int
    genus: int
    L: IntPolynomial
    F: IntPolynomial

    def __post_init__(self):
        g, q = self.genus, self.q
        if self.L.degree != 2 * g or self.L[0] != 1:
            raise InvariantViolation("L must have degree 2g and L(0) = 1")
        for i in range(g + 1):
            if self.L[2 * g - i] != q ** (g - i) * self.L[i]:
                raise InvariantViolation("functional equation a_(2g-i) = q^(g-i) a_i fails")
        if self.F != self.L.reversed():
            raise InvariantViolation("F must be the reversal of L")
        if ep.evaluate(self.L, 1) <= 0:
            raise InvariantViolation("L(1) must be positive")
        if g == 1 and self.L[1] ** 2 > 4 * q:
            raise InvariantViolation("Hasse bound violated")

    @classmethod
    def from_frobenius(cls, F: IntPolynomial, q: int) -> "LPolynomialData":
        if F.degree % 2 or F.leading != 1:
            raise DomainError("Frobenius polynomial must be monic of even degree")
        return cls(q, F.degree // 2, F.reversed(), F)


def frobenius_poly(E: EllipticCurveSpec) -> LPolynomialData:
    trace = E.l + 1 - point_count(E)
    return LPolynomialData.from_frobenius(IntPolynomial([E.l, -trace, 1]), E.l)


def base_extend(data: LPolynomialData, e: int) -> LPolynomialData:
    """Frobenius polynomial over the degree-e extension (power sums of the roots)."""
    if data.genus != 1:
        raise DomainError("base_extend is implemented for genus 1")
    if e < 1:
        raise DomainError("extension degree must be positive")
    q = data.q
    s1 = -data.F[1]
    prev, cur = 2, s1
    for _ in range(e - 1):
        prev, cur = cur, s1 * cur - q * prev
    F = IntPolynomial([q**e, -cur, 1])
    if F != ep.power_transform(data.F, e):
        raise InvariantViolation("trace recurrence disagrees with the power root transform")
    return LPolynomialData.from_frobenius(F, q**e)


def class_number(data: LPolynomialData, n: int) -> int:
    if n < 1:
        raise DomainError("extension degree must be positive")
    return abs(ep.cyclic_resultant(data.F, n))


def classify(E: EllipticCurveSpec, D: int | None = None) -> dict:
    """Supersingular (trace 0), anomalous (l divides the count) or ordinary.

    For l >= 7 the Hasse bound makes "l divides the count" the same as
    "count = l"; over F_5 a count of 10 is also anomalous.
    """
    count = point_count(E)
    trace = E.l + 1 - count
    if trace == 0:
        kind = "supersingular"
    elif count % E.l == 0:
        kind = "anomalous"
    else:
        kind = "ordinary"
    out = {"l": E.l, "count": count, "trace": trace, "class": kind}
    if D is not None:
        if D >= 0:
            raise DomainError("CM discriminant must be negative")
        symbol = legendre_symbol(D, E.l)
        out["legendre"] = symbol
        # with CM by Q(sqrt D), l is supersingular exactly when l is inert
        if symbol != 0 and (symbol == -1) != (kind == "supersingular"):
            raise InvariantViolation(
                f"({D}/{E.l}) = {symbol} is inconsistent with a {kind} reduction"
            )
    return out


def class_tower(E: EllipticCurveSpec, e: int, p: int, N: int = 8,
                method: str = "formula") -> LimitReport:
    """Limits of the class numbers over the degree e p^n constant extensions."""
    data = base_extend(frobenius_poly(E), e)
    rep = compute_limit(data.F, p, N, method=method)
    if e == 1 and p == E.l:
        kind = classify(E)["class"]
        one = not rep.limit.is_zero() and rep.limit.residue(N) == 1
        if one != (kind == "supersingular"):
            raise InvariantViolation("limit 1 must coincide with supersingular reduction")
        anomalous_shape = rep.limit.is_zero() and rep.invariants.nu == 1
        if anomalous_shape != (kind == "anomalous"):
            raise InvariantViolation("limit 0 with nu = 1 must coincide with anomalous reduction")
    return rep


def all_curves(l: int):
    for a in range(l):
        for b in range(l):
            if (4 * a**3 + 27 * b**2) % l:
                yield EllipticCurveSpec(l, a, b)

