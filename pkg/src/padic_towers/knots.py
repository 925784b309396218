"""Knot towers: Alexander polynomials and the homology of cyclic branched covers.

The n-fold cyclic branched cover of a knot with Alexander polynomial D has
first homology of order |Res(t^n - 1, D)| (Fox-Weber); its torsion part in the
unbranched cover has the same order.  Everything here reduces to the exact
and p-adic engines in :mod:`exact_poly` and :mod:`limits`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

from . import exact_poly as ep
from .errors import DomainError, VanishingTowerError
from .exact_poly import IntPolynomial, cyclotomic, euler_phi, factorize, valuation
from .limits import LimitReport, compute_limit
from .padic import PadicScalar


@dataclass(frozen=True)
class TorusKnotSpec:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 2 or self.b < 2:
            raise DomainError("torus knot parameters must be at least 2")
        if math.gcd(self.a, self.b) != 1:
            raise DomainError(f"T({self.a},{self.b}) is not a knot: gcd(a, b) != 1")


@dataclass(frozen=True)
class TwistKnotSpec:
    """J(2, 2m); m = 1 is the trefoil and m = -1 the figure-eight."""

    m: int

    def __post_init__(self):
        if self.m == 0:
            raise DomainError("twist parameter m must be nonzero")


@dataclass(frozen=True)
class KnotPolynomial:
    delta: IntPolynomial
    provenance: str = "user"  # torus | twist | user
    unnormalized: bool = False

    def __post_init__(self):
        if self.delta.is_zero():
            raise DomainError("Alexander polynomial must be nonzero")
        if self.provenance not in ("torus", "twist", "user"):
            raise DomainError(f"unknown provenance {self.provenance!r}")
        if not self.unnormalized and ep.evaluate(self.delta, 1) not in (1, -1):
            raise DomainError(
                "Alexander polynomial must satisfy D(1) = +-1 "
                "(pass allow_unnormalized to experiment)"
            )

    @classmethod
    def from_user(cls, delta: IntPolynomial, allow_unnormalized: bool = False) -> "KnotPolynomial":
        normalized = ep.evaluate(delta, 1) in (1, -1)
        if not normalized and allow_unnormalized:
            warnings.warn("D(1) != +-1: Fox-Weber normalization is unverified", stacklevel=2)
        return cls(delta, "user", unnormalized=not normalized and allow_unnormalized)


def alexander_torus(spec: TorusKnotSpec) -> KnotPolynomial:
    a, b = spec.a, spec.b
    delta = IntPolynomial([1])
    for m in ep.divisors(a * b):
        if a % m and b % m:
            delta = delta * cyclotomic(m)
    # (1-t)(1-t^ab) / ((1-t^a)(1-t^b))
    one = IntPolynomial([1])
    t = IntPolynomial.monomial(1)
    num = (one - t) * (one - t ** (a * b))
    den = (one - t ** a) * (one - t ** b)
    if num.exact_quotient(den) != delta:
        raise AssertionError("cyclotomic product disagrees with the quotient formula")
    return KnotPolynomial(delta, "torus")


def alexander_twist(spec: TwistKnotSpec) -> KnotPolynomial:
    m = spec.m
    return KnotPolynomial(IntPolynomial([m, 1 - 2 * m, m]), "twist")


def _check_finite(delta: IntPolynomial, n: int) -> None:
    d = ep.vanishing_divisor(delta, n)
    if d is not None:
        raise VanishingTowerError(
            f"infinite homology (Betti growth): Phi_{d} divides the Alexander polynomial",
            level=n,
        )


def homology_order(K: KnotPolynomial, n: int, budget: int | None = None) -> int:
    """|H_1| of the n-fold cyclic branched cover."""
    if n < 1:
        raise DomainError("cover degree must be positive")
    _check_finite(K.delta, n)
    return abs(ep.cyclic_resultant(K.delta, n, budget=budget))


def h1_sign(delta: IntPolynomial, p: int) -> int:
    """Sign turning Res(t^(p^n) - 1, D) into |H_1|, fixed for all n >= 1."""
    return ep.cyclic_resultant_sign(delta, 2 if p == 2 else 1)


@dataclass
class KnotTowerReport:
    """Limit report for the resultants plus the |H_1| view of the same tower.

    ``h1_limit`` is sign * (limit of Res); it may look negative in Z_p (for
    example -3 in Z_2) even though every |H_1| is positive.
    """

    p: int
    level_base: int
    sign: int
    report: LimitReport
    h1_limit: PadicScalar
    h1_nonp_limit: PadicScalar | None
    levels: list = field(default_factory=list)  # (n, |H_1| at level_base * p^n)
    warnings: list = field(default_factory=list)


def _exact_levels(delta, base, p, sign, max_digits=20_000):
    out = []
    n = 0
    while ep.estimated_digits(delta, base * p**n) <= max_digits and n <= 12:
        value = ep.cyclic_resultant(delta, base * p**n)
        out.append((n, abs(value)))
        n += 1
    return out


def homology_tower(K: KnotPolynomial, p: int, N: int = 8, method: str = "formula") -> KnotTowerReport:
    ep.require_prime(p)
    k = 0
    while euler_phi(p**k) <= K.delta.degree:
        _check_finite(K.delta, p**k)
        k += 1
    rep = compute_limit(K.delta, p, N, method=method)
    sign = h1_sign(K.delta, p)
    nonp = None if rep.nonp_limit is None else rep.nonp_limit * sign
    notes = []
    if K.unnormalized:
        notes.append("Fox-Weber normalization unverified: D(1) != +-1")
    return KnotTowerReport(
        p, 1, sign, rep, rep.limit * sign, nonp,
        levels=_exact_levels(K.delta, 1, p, sign), warnings=notes,
    )


def torus_closed_form(spec: TorusKnotSpec, p: int, n: int) -> int:
    """b^(p^min(n, r) - 1) where p^r exactly divides a."""
    ep.require_prime(p)
    if spec.b % p == 0:
        raise DomainError(f"closed form needs p not dividing b (p={p}, b={spec.b})")
    if n < 0:
        raise DomainError("level must be nonnegative")
    r = valuation(spec.a, p)
    return spec.b ** (p ** min(n, r) - 1)


def twist_special_limit(spec: TwistKnotSpec, p: int) -> int:
    """Limit of Res(t^(p^n) - 1, D) for J(2, 2m) when p divides m.

    Returns -1 for p = 2 and 1 otherwise.  For p = 2 and m < 0 the |H_1| tower
    has the opposite sign (see :func:`twist_h1_limit`).
    """
    ep.require_prime(p)
    if spec.m % p:
        raise DomainError(f"needs p | m (p={p}, m={spec.m})")
    return -1 if p == 2 else 1


def twist_h1_limit(spec: TwistKnotSpec, p: int) -> int:
    """Limit of |H_1| itself, i.e. the resultant limit times the sign of D(-1) for p = 2."""
    limit = twist_special_limit(spec, p)
    if p == 2:
        limit *= 1 if 4 * spec.m - 1 > 0 else -1
    return limit


def composite_tower(K: KnotPolynomial, m: int, p: int, N: int = 8,
                    method: str = "formula") -> KnotTowerReport:
    """Tower over the levels m * p^n, driven by the m-th power root transform."""
    ep.require_prime(p)
    if m < 1 or m % p == 0:
        raise DomainError("composite tower needs a positive m prime to p")
    d = K.delta.degree
    k = 0
    while euler_phi(p**k) <= d * m:
        _check_finite(K.delta, m * p**k)
        k += 1
    g = ep.power_transform(K.delta, m)
    norm_sign = 1 if g.leading > 0 else -1
    g = g * norm_sign
    s = ep.cyclic_resultant_sign(K.delta, m * p)
    # Res(t^(m p^n)-1, D) = (-1)^((m+1) p^n d) * norm_sign^(p^n) * Res(t^(p^n)-1, g)
    factor = s * (-1) ** (((m + 1) * p * d) % 2) * norm_sign ** (p % 2 or 2)
    rep = compute_limit(g, p, N, method=method)
    nonp = None if rep.nonp_limit is None else rep.nonp_limit * factor
    notes = []
    if K.unnormalized:
        notes.append("Fox-Weber normalization unverified: D(1) != +-1")
    return KnotTowerReport(
        p, m, factor, rep, rep.limit * factor, nonp,
        levels=_exact_levels(K.delta, m, p, factor), warnings=notes,
    )


def scaled_levels(levels, p):
    """Non-p parts of the exact |H_1| values."""
    return [(n, v // p ** valuation(v, p)) for n, v in levels]


def least_positive_residues(values, p):
    """value mod p^n mapped into [1, p^n]; n = 0 gives 1."""
    out = []
    for n, v in enumerate(values):
        r = v % p**n
        out.append(r if r else p**n)
    return out


@dataclass
class LivingstonCertificate:
    holds: bool
    factors: list  # (m, exponent) pairs in the order found
    blocking: object = None  # offending m, or the non-cyclotomic remainder
    unit: int = 1
    t_power: int = 0


def livingston_predicate(K: KnotPolynomial | IntPolynomial) -> LivingstonCertificate:
    """Is D = +-t^k prod Phi_m^e with every m having at least three prime factors?"""
    delta = K.delta if isinstance(K, KnotPolynomial) else K
    if delta.is_zero():
        raise DomainError("zero polynomial")
    shift = next(i for i, c in enumerate(delta.coeffs) if c)
    rest = IntPolynomial(delta.coeffs[shift:])
    factors = []
    blocking = None
    # phi(m) >= sqrt(m / 2), so candidates stop at 2 deg^2
    for m in range(1, 2 * rest.degree**2 + 3):
        if rest.degree == 0:
            break
        if euler_phi(m) > rest.degree:
            continue
        e = ep.cyclotomic_multiplicity(rest, m)
        if e:
            rest = rest.exact_quotient(cyclotomic(m) ** e)
            factors.append((m, e))
            if blocking is None and len(factorize(m)) < 3:
                blocking = m
    if rest.degree > 0:
        return LivingstonCertificate(False, factors, blocking=rest, t_power=shift)
    unit = rest.coeffs[0]
    if unit not in (1, -1):
        return LivingstonCertificate(False, factors, blocking=rest, t_power=shift)
    return LivingstonCertificate(blocking is None, factors, blocking, unit, shift)
