"""p-adic limits of the cyclic resultants Res(t^(p^n) - 1, f).

Two independent engines produce the limit and the limit of the non-p parts:

* the *sequence* engine computes the exact resultants up to level N and reads
  off residues (consecutive layers agree modulo p^n);
* the *formula* engine never touches the tower.  It classifies the roots of f
  with the Newton polygon, reads the unit xi off the polygon vertex, finds the
  Teichmuller roots zeta_i as the fixed point of the p-th power root transform,
  and handles the roots close to 1 through a Hensel factor of f(1+T) and a
  truncated-logarithm resultant.

Individual roots never appear: every per-root product is a resultant or a
value of a polynomial whose roots are the relevant multiset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math

import gmpy2
from gmpy2 import mpz

from . import exact_poly as ep
from .errors import DomainError, InvariantViolation, PrecisionError, VanishingTowerError
from .exact_poly import IntPolynomial, cyclotomic, euler_phi, require_prime, valuation
from .padic import (
    GUARD_DIGITS,
    NewtonPolygon,
    PadicScalar,
    log_terms_needed,
    newton_polygon,
    newton_polygon_from_valuations,
    teichmuller_residue,
)

log = logging.getLogger(__name__)

#: digit budget for the exact levels used to confirm the Iwasawa invariants
INVARIANT_CHECK_DIGITS = 200_000
INVARIANT_CHECK_LEVELS = 12


# ---------------------------------------------------------------------------
# polynomials over Z/p^k, ascending coefficient lists of ints
# ---------------------------------------------------------------------------

def _red(c, mod):
    out = [x % mod for x in c]
    while out and out[-1] == 0:
        out.pop()
    return out


def _add(a, b, mod):
    n = max(len(a), len(b))
    return _red([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                 for i in range(n)], mod)


def _sub(a, b, mod):
    return _add(a, [-x for x in b], mod)


def _mul(a, b, mod):
    return _red(ep._mul(a, b), mod)


def _divmod_monic(a, g, mod):
    """Division by a monic polynomial over Z/mod."""
    a = _red(a, mod)
    dg = len(g) - 1
    if len(a) - 1 < dg:
        return [], a
    q = [0] * (len(a) - dg)
    for k in range(len(a) - 1 - dg, -1, -1):
        c = a[k + dg] % mod
        q[k] = c
        if c:
            for i in range(dg + 1):
                a[k + i] = (a[k + i] - c * g[i]) % mod
    return _red(q, mod), _red(a[:dg], mod)


def _monic_mod_p(c, p):
    c = _red(c, p)
    inv = pow(c[-1], -1, p)
    return [(x * inv) % p for x in c]


def _xgcd_mod_p(a, b, p):
    """s, t with s*a + t*b = 1 over F_p for coprime a, b."""
    r0, r1 = _red(a, p), _red(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        inv = pow(r1[-1], -1, p)
        q = []
        r = list(r0)
        while r and len(r) >= len(r1):
            c = r[-1] * inv % p
            shift = len(r) - len(r1)
            q_term = [0] * shift + [c]
            q = _add(q, q_term, p)
            r = _sub(r, [0] * shift + [c * x for x in r1], p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    if len(r0) != 1:
        raise InvariantViolation("Hensel factors are not coprime mod p")
    inv = pow(r0[0], -1, p)
    return [x * inv % p for x in s0], [x * inv % p for x in t0]


def _value_at_one(c, mod):
    return sum(c) % mod


# ---------------------------------------------------------------------------
# root classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootClassification:
    """How the roots of f split p-adically.

    ``s`` roots have |alpha|_p > 1, ``e`` have |alpha|_p < 1 and ``unit`` are
    p-adic units; ``lam`` of the unit roots reduce to 1.  ``h`` is the monic
    unit-root factor of f/p^mu mod p (ascending, entries in [0, p)).
    """

    p: int
    mu: int
    s: int
    e: int
    unit: int
    lam: int
    h: tuple
    reduced: tuple
    polygon: NewtonPolygon


def primitive_part(f: IntPolynomial, p: int) -> tuple[IntPolynomial, int]:
    mu = ep.p_content(f, p)
    return IntPolynomial([c // p**mu for c in f.coeffs]), mu


def classify_roots(f: IntPolynomial, p: int) -> RootClassification:
    require_prime(p)
    f1, mu = primitive_part(f, p)
    poly = newton_polygon(f1, p)
    d = f1.degree
    fbar = _red(f1.coeffs, p)
    e = next(i for i, c in enumerate(fbar) if c)
    s = d - (len(fbar) - 1)
    h = _monic_mod_p(fbar[e:], p)
    if (poly.count_neg, poly.count_pos) != (s, e):
        raise InvariantViolation("Newton polygon disagrees with the reduction mod p")
    lam = 0
    cur = h
    while len(cur) > 1 and _value_at_one(cur, p) == 0:
        cur, r = _divmod_monic(cur, [p - 1, 1], p)
        lam += 1
    return RootClassification(p, mu, s, e, len(h) - 1, lam, tuple(h), tuple(fbar), poly)


def xi_unit(f: IntPolynomial, p: int, N: int) -> PadicScalar:
    """Teichmuller lift of the unit part of a0 * prod_{|alpha|_p>1} alpha / p^mu.

    That product equals (-1)^s c_s up to higher-valuation terms, where c_s is
    the coefficient of t^(d-s) at the Newton polygon vertex.
    """
    cls = classify_roots(f, p)
    f1, _ = primitive_part(f, p)
    c = f1.coeffs[f1.degree - cls.s]
    if c % p == 0:
        raise InvariantViolation("polygon vertex coefficient is divisible by p")
    c = -c if cls.s % 2 else c
    return PadicScalar(p, N, 0, teichmuller_residue(c, p, N))


# ---------------------------------------------------------------------------
# the Teichmuller-lift polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TeichPolynomial:
    """Monic polynomial mod p^precision whose roots are the zeta_i."""

    p: int
    precision: int
    coeffs: tuple  # residues mod p^precision, ascending, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def padic_coefficients(self) -> list[PadicScalar]:
        return [PadicScalar.from_int(c, self.p, self.precision) for c in self.coeffs]

    def value_at_one(self) -> int:
        return _value_at_one(self.coeffs, self.p**self.precision)


def _teich_fixed_point(h, p, K):
    mod = p**K
    H = list(h)
    for _ in range(K + len(h) + 16):
        nxt = _red([int(x) for x in ep._power_transform_list([mpz(x) for x in H], p)], mod)
        if nxt == H:
            return H
        H = nxt
    raise PrecisionError("Teichmuller polynomial iteration did not stabilise", K)


def teich_poly(f: IntPolynomial, p: int, N: int) -> TeichPolynomial:
    """prod_i (t - zeta_i) over the unit roots, as the fixed point of the p-th
    power root transform started from any lift of the unit-root factor mod p."""
    cls = classify_roots(f, p)
    H = _teich_fixed_point(cls.h, p, N)
    return TeichPolynomial(p, N, tuple(H))


# ---------------------------------------------------------------------------
# Hensel factor near 1 and the logarithm product
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HenselFactor:
    """f(1+T)/p^mu = g * u mod p^precision with g monic, g = T^lam mod p."""

    p: int
    precision: int
    g: tuple
    cofactor: tuple

    @property
    def degree(self) -> int:
        return len(self.g) - 1


def hensel_distinguished_factor(f: IntPolynomial, p: int, N: int) -> HenselFactor:
    require_prime(p)
    f1, _ = primitive_part(f, p)
    F = list(f1.taylor_shift(1).coeffs)
    Fbar = _red(F, p)
    lam = next(i for i, c in enumerate(Fbar) if c)
    if lam == 0:
        raise DomainError("no distinguished part: f(1) is prime to p")
    g = [0] * lam + [1]
    u = Fbar[lam:]
    s, t = _xgcd_mod_p(g, u, p)
    k = 1
    while k < N:
        k2 = min(2 * k, N)
        mod = p**k2
        e = _sub(F, _mul(g, u, mod), mod)
        q, dg = _divmod_monic(_mul(t, e, mod), g, mod)
        du = _add(_mul(s, e, mod), _mul(q, u, mod), mod)
        g = _add(g, dg, mod)
        u = _add(u, du, mod)
        # lift the Bezout pair to the new precision and keep deg t < deg g
        b = _sub(_add(_mul(s, g, mod), _mul(t, u, mod), mod), [1], mod)
        q2, r2 = _divmod_monic(_mul(t, b, mod), g, mod)
        t = _sub(t, r2, mod)
        s = _sub(s, _add(_mul(s, b, mod), _mul(q2, u, mod), mod), mod)
        q3, t = _divmod_monic(t, g, mod)
        s = _add(s, _mul(q3, u, mod), mod)
        k = k2
    mod = p**N
    if _sub(F, _mul(g, u, mod), mod) or len(g) != lam + 1:
        raise InvariantViolation("Hensel lift failed to reproduce f(1+T)")
    return HenselFactor(p, N, tuple(g), tuple(u))


def _min_root_valuation(g, p, K) -> Fraction:
    """Smallest root valuation of a monic g with coefficients known mod p^K."""
    vals = [valuation(c, p) if c % p**K else K for c in g[:-1]] + [0]
    poly = newton_polygon_from_valuations(vals, p)
    return min(s for s, _ in poly.slopes)


def _log_lower_bound(w: Fraction, p: int) -> Fraction:
    """min_k p^k w - k, a lower bound for v(log(1+eps)) when v(eps) = w."""
    best = w
    for k in range(1, 80):
        cand = p**k * w - k
        best = min(best, cand)
        if cand > best + 1 and p**k * w > 4:
            break
    return best


def _log_plan(g, p, K, absolute):
    """Truncation length M and the digits lost to lcm(1..M) for a target."""
    lam = len(g) - 1
    w = _min_root_valuation(g, p, K)
    slack = (lam - 1) * min(Fraction(0), _log_lower_bound(w, p))
    M = log_terms_needed(w, p, Fraction(absolute) - slack)
    D = math.lcm(*range(1, M + 1))
    return M, D, valuation(D, p)


def log_product(factor: HenselFactor, absolute: int) -> PadicScalar:
    """prod over the roots eps_i of g of log(1 + eps_i), to `absolute` digits.

    Computed as Res(g, D * L_M) / D^lam with L_M the truncated log series and
    D = lcm(1..M) making it integral; g is reduced against L_M first.
    """
    p = factor.p
    K = factor.precision
    g = list(factor.g)
    lam = len(g) - 1
    if lam < 1:
        raise DomainError("log product needs a distinguished factor of degree >= 1")
    M, D, vD = _log_plan(g, p, K, absolute)
    if K < absolute + lam * vD:
        raise PrecisionError(
            f"Hensel factor known to {K} digits, {absolute + lam * vD} needed", K
        )
    mod = p**K
    r = []
    power = [1]
    for n in range(1, M + 1):
        _, power = _divmod_monic([0] + power, g, mod)
        coeff = D // n if n % 2 else -(D // n)
        r = _add(r, [coeff * x for x in power], mod)
    res = ep._subresultant([mpz(x) for x in g], [mpz(x) for x in r]) if r else mpz(0)
    value = PadicScalar.from_int(int(res) % mod, p, K)
    scale = PadicScalar.exact(D**lam, p, K + 64)
    return _truncate_absolute(value / scale, absolute)


def _truncate_absolute(x: PadicScalar, absolute: int) -> PadicScalar:
    if x.is_zero():
        return PadicScalar.zero(x.p, min(x.valuation, absolute))
    if x.absolute_precision <= absolute:
        return x
    if x.valuation >= absolute:
        return PadicScalar.zero(x.p, absolute)
    return x.with_precision(absolute - x.valuation)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class IwasawaInvariants:
    lam: int
    mu: int
    nu: int
    stabilization_index: int | None = None
    checked_levels: int = 0


@dataclass
class OracleResult:
    limit: PadicScalar
    nonp_limit: PadicScalar
    values: list  # exact Res(t^(p^k)-1, f), k = 0..N
    valuations: list


@dataclass
class LimitReport:
    p: int
    precision: int
    polynomial: IntPolynomial
    limit: PadicScalar
    limit_is_zero: bool
    zero_reason: str  # "mu", "lambda" or "nonzero"
    nonp_limit: PadicScalar | None
    nonp_absent_reason: str | None
    xi: PadicScalar
    invariants: IwasawaInvariants
    sign_exponent: int
    method: str
    agreement_digits: int | None = None
    corollary_m: int | None = None
    notes: list = field(default_factory=list)
    oracle: OracleResult | None = None


# ---------------------------------------------------------------------------
# sequence engine
# ---------------------------------------------------------------------------

def check_tower_nonvanishing(f: IntPolynomial, p: int, levels: int | None = None) -> None:
    """Raise if Res(t^(p^k) - 1, f) = 0 for some k (<= levels when given)."""
    k = 0
    while euler_phi(p**k) <= f.degree and (levels is None or k <= levels):
        if ep.cyclotomic_multiplicity(f, p**k):
            raise VanishingTowerError(f"tower vanishes at level {k}", level=k)
        k += 1


def limit_sequence_oracle(f: IntPolynomial, p: int, N: int, budget: int | None = None) -> OracleResult:
    if f.is_zero():
        raise DomainError("zero polynomial")
    require_prime(p)
    check_tower_nonvanishing(f, p, N)
    values = ep.cyclic_resultant_sequence(f, p, N, budget=budget)
    vals = [valuation(v, p) for v in values]
    last = values[-1]
    limit = PadicScalar.from_int(last, p, N)
    unit = last // p ** vals[-1]
    nonp = PadicScalar.from_int(unit, p, N)
    return OracleResult(limit, nonp, values, vals)


# ---------------------------------------------------------------------------
# formula engine
# ---------------------------------------------------------------------------

def _sign_exponent(f: IntPolynomial, p: int, cls: RootClassification) -> int:
    return (p * f.degree + cls.e) % 2


def _signed(x: PadicScalar, parity: int) -> PadicScalar:
    return -x if parity % 2 else x


def _unit_part(f, p, K, cls):
    """sign * xi * prod_{zeta_i != 1} (zeta_i - 1), to K digits."""
    mod = p**K
    xi = xi_unit(f, p, K)
    H = _teich_fixed_point(cls.h, p, K)
    Hc = H
    for _ in range(cls.lam):
        Hc, r = _divmod_monic(Hc, [mod - 1, 1], mod)
        if r:
            raise InvariantViolation("(t-1)^lambda does not divide the Teichmuller polynomial")
    prod = _value_at_one(Hc, mod)
    if (len(Hc) - 1) % 2:
        prod = -prod
    val = PadicScalar.from_int(prod, p, K)
    if val.is_zero() or val.valuation:
        raise InvariantViolation("product of (zeta_i - 1) over zeta_i != 1 is not a unit")
    sign = _sign_exponent(f, p, cls)
    return _signed(xi * val, sign), xi, H


def limit_formula_value(f: IntPolynomial, p: int, N: int):
    """(limit, xi, classification) by the closed formula."""
    if f.is_zero():
        raise DomainError("zero polynomial")
    require_prime(p)
    K = N + GUARD_DIGITS
    cls = classify_roots(f, p)
    xi = xi_unit(f, p, K)
    if cls.mu > 0:
        return PadicScalar.zero(p, N), xi, cls, "mu"
    if cls.lam > 0:
        return PadicScalar.zero(p, N), xi, cls, "lambda"
    unit, xi, _ = _unit_part(f, p, K, cls)
    return unit.with_precision(N), xi, cls, "nonzero"


def _nonp_formula(f, p, N):
    """(non-p limit, nu) by the closed formula, with adaptive working precision."""
    check_tower_nonvanishing(f, p)
    f1, mu = primitive_part(f, p)
    cls = classify_roots(f1, p)
    K = N + GUARD_DIGITS
    unit, _, _ = _unit_part(f1, p, K, cls)
    if cls.lam == 0:
        return unit.with_precision(N), 0
    target = N + GUARD_DIGITS + cls.lam
    for _ in range(8):
        rough = hensel_distinguished_factor(f1, p, target)
        M, D, vD = _log_plan(list(rough.g), p, target, target)
        factor = hensel_distinguished_factor(f1, p, target + cls.lam * vD + 2)
        prod = log_product(factor, target)
        if prod.is_zero():
            target *= 2
            continue
        nu = prod.valuation
        if prod.precision < N:
            target = N + GUARD_DIGITS + nu
            continue
        normalized = PadicScalar(p, prod.precision, 0, prod.unit)
        _check_shortcut(f1, p, cls, nu)
        return (unit * normalized).with_precision(N), nu
    raise PrecisionError("log product did not reach the requested precision", N)


def _check_shortcut(f1, p, cls, nu):
    """If every root near 1 is within p^(-1/(p-1)) of 1 then nu = v_p(f(1))."""
    F = f1.taylor_shift(1)
    poly = newton_polygon(F, p)
    positive = [s for s, _ in poly.slopes if s > 0]
    if positive and all(s > Fraction(1, p - 1) for s in positive):
        expected = valuation(ep.evaluate(f1, 1), p)
        if expected != nu:
            raise InvariantViolation(f"nu = {nu} but v_p(f(1)) = {expected}")


def limit_formula(f: IntPolynomial, p: int, N: int) -> LimitReport:
    return compute_limit(f, p, N, method="formula")


def nonp_limit_formula(f: IntPolynomial, p: int, N: int) -> PadicScalar:
    return _nonp_formula(f, p, N)[0]


def iwasawa_invariants(f: IntPolynomial, p: int, check: bool = True,
                       check_digits: int = INVARIANT_CHECK_DIGITS) -> IwasawaInvariants:
    if f.is_zero():
        raise DomainError("zero polynomial")
    require_prime(p)
    check_tower_nonvanishing(f, p)
    f1, mu = primitive_part(f, p)
    cls = classify_roots(f1, p)
    nu = _nonp_formula(f, p, 2)[1] if cls.lam else 0
    inv = IwasawaInvariants(cls.lam, mu, nu)
    if check:
        _confirm_invariants(f, p, inv, check_digits)
    return inv


def _confirm_invariants(f, p, inv, check_digits):
    """Exact valuations of small layers; records where lam*n + mu*p^n + nu takes over."""
    levels = 0
    while (levels < INVARIANT_CHECK_LEVELS
           and ep.estimated_digits(f, p ** (levels + 1)) <= check_digits):
        levels += 1
    values = ep.cyclic_resultant_sequence(f, p, levels)
    vals = [valuation(v, p) for v in values]
    law = [inv.lam * n + inv.mu * p**n + inv.nu for n in range(levels + 1)]
    n0 = None
    for n in range(levels, -1, -1):
        if vals[n] != law[n]:
            break
        n0 = n
    inv.stabilization_index = n0
    inv.checked_levels = levels
    if n0 is None or n0 > levels - 1:
        log.warning("Iwasawa law not confirmed within %d exact levels", levels)


def _corollary_index(f: IntPolynomial, p: int):
    """m with f = Phi_m mod p, p not dividing m, for monic f; else None."""
    if f.leading != 1:
        return None
    d = f.degree
    for m in range(1, 4 * d * d + 7):
        if m % p and euler_phi(m) == d:
            if not _red((f - cyclotomic(m)).coeffs, p):
                return m
    return None


def compute_limit(f: IntPolynomial, p: int, N: int = 8, method: str = "formula",
                  budget: int | None = None, check_invariants: bool = True) -> LimitReport:
    """Full tower report for Res(t^(p^n) - 1, f) with the chosen engine(s)."""
    if method not in ("formula", "sequence", "both"):
        raise DomainError(f"unknown method {method!r}")
    if f.is_zero():
        raise DomainError("zero polynomial")
    require_prime(p)
    if N < 1:
        raise DomainError("precision must be positive")
    K = N + GUARD_DIGITS
    cls = classify_roots(f, p)
    xi = xi_unit(f, p, K).with_precision(N)
    sign = _sign_exponent(f, p, cls)
    notes = []
    vanishing = None
    try:
        check_tower_nonvanishing(f, p)
    except VanishingTowerError as exc:
        vanishing = exc
    if vanishing is not None and method != "formula":
        raise vanishing

    invariants = None
    nonp = None
    absent = None
    if vanishing is None:
        invariants = iwasawa_invariants(f, p, check=check_invariants)
    else:
        absent = str(vanishing)
        invariants = IwasawaInvariants(cls.lam, cls.mu, 0)
        notes.append("tower vanishes; nu undefined")

    oracle = None
    formula_limit = formula_nonp = None
    if method in ("formula", "both"):
        formula_limit, _, _, reason = limit_formula_value(f, p, N)
        if vanishing is None:
            formula_nonp = _nonp_formula(f, p, N)[0]
    if method in ("sequence", "both"):
        oracle = limit_sequence_oracle(f, p, N, budget=budget)

    if method == "sequence":
        limit, nonp = oracle.limit, oracle.nonp_limit
        reason = "mu" if cls.mu else ("lambda" if cls.lam else "nonzero")
    else:
        limit, nonp = formula_limit, formula_nonp

    agreement = None
    if method == "both":
        agreement = min(limit.agreement(oracle.limit), nonp.agreement(oracle.nonp_limit))
        if agreement < N:
            raise InvariantViolation(
                f"formula and sequence engines agree to only {agreement} of {N} digits"
            )

    if limit.is_zero() != (ep.evaluate(f, 1) % p == 0):
        raise InvariantViolation("zero criterion violated: limit = 0 must match p | f(1)")

    corollary = _corollary_index(f, p)
    if corollary is not None and not limit.is_zero():
        expected = ep.evaluate(cyclotomic(corollary), 1)
        if limit.residue(N) != expected % p**N:
            raise InvariantViolation(f"cyclotomic corollary fails for m = {corollary}")
    if cls.mu:
        notes.append("mu > 0: non-p part computed from f / p^mu")

    return LimitReport(
        p=p, precision=N, polynomial=f, limit=limit, limit_is_zero=limit.is_zero(),
        zero_reason=reason, nonp_limit=nonp, nonp_absent_reason=absent, xi=xi,
        invariants=invariants, sign_exponent=sign, method=method,
        agreement_digits=agreement, corollary_m=corollary, notes=notes, oracle=oracle,
    )
