import random

import pytest

from padic_towers.errors import DomainError, VanishingTowerError
from padic_towers.exact_poly import (
    IntPolynomial,
    cyclic_resultant_sequence,
    cyclotomic,
    evaluate,
    power_transform,
    valuation,
)
from padic_towers.limits import (
    _divmod_monic,
    classify_roots,
    compute_limit,
    hensel_distinguished_factor,
    iwasawa_invariants,
    limit_formula,
    limit_sequence_oracle,
    log_product,
    nonp_limit_formula,
    teich_poly,
    xi_unit,
)
from padic_towers.padic import PadicScalar, padic_log


def P(*c):
    return IntPolynomial(list(c))


FIG8 = P(-1, 3, -1)
E5 = P(5, -1, 1)
E125 = P(125, 14, 1)
E37 = P(37, -1, 1)


def oracle_nonp_residues(f, p, n_max):
    """(Res_n / p^v) mod p^n straight from exact levels."""
    vals = cyclic_resultant_sequence(f, p, n_max)
    return [(v // p ** valuation(v, p)) % p**n for n, v in enumerate(vals) if n]


def test_classify_roots_examples():
    c = classify_roots(E5, 5)
    assert (c.mu, c.s, c.e, c.unit, c.lam) == (0, 0, 1, 1, 1)
    assert c.h == (4, 1)
    c = classify_roots(E125, 2)
    assert (c.mu, c.s, c.e, c.unit, c.lam) == (0, 0, 0, 2, 2)
    c = classify_roots(FIG8, 2)
    assert (c.lam, c.unit) == (0, 2)


def test_xi_examples():
    assert xi_unit(P(7, 3, 1), 5, 6).residue(6) == 1
    assert xi_unit(P(-1, 2), 2, 6).residue(6) == 1
    # 3t^2-5t+3 at p=3: the big root satisfies 3*alpha = 2 mod 3, so xi = teich(2) = -1
    assert xi_unit(P(3, -5, 3), 3, 6).signed_residue(6) == -1


def test_teich_poly_examples():
    assert teich_poly(E5, 5, 6).coeffs == (5**6 - 1, 1)
    assert teich_poly(P(1, -3, 1), 2, 8).coeffs == (1, 1, 1)
    H = teich_poly(E125, 3, 8)
    assert [c % 3 for c in H.coeffs] == [2, 2, 1]
    mod = 3**8
    image = power_transform(IntPolynomial(list(H.coeffs)), 3)
    assert [c % mod for c in image.coeffs] == list(H.coeffs)


def test_hensel_examples():
    g = hensel_distinguished_factor(E5, 5, 6)
    assert g.degree == 1 and g.g[0] % 25 == 5  # T - eps with eps = 20 mod 25
    F = hensel_distinguished_factor(P(1, -18, 1), 2, 10)
    assert F.g == ((-16) % 2**10, (-16) % 2**10, 1)
    with pytest.raises(DomainError):
        hensel_distinguished_factor(FIG8, 7, 5)


def test_hensel_reproduces_factorization():
    rng = random.Random(2)
    checked = 0
    while checked < 40:
        p = rng.choice([2, 3, 5, 7])
        f = IntPolynomial([rng.randint(-40, 40) for _ in range(rng.randint(2, 5))] + [1])
        c = classify_roots(f, p)
        if c.lam == 0 or c.mu:
            continue
        N = 12
        H = hensel_distinguished_factor(f, p, N)
        mod = p**N
        shifted = [x % mod for x in f.taylor_shift(1).coeffs]
        prod = (IntPolynomial(list(H.g)) * IntPolynomial(list(H.cofactor))).coeffs
        prod = [x % mod for x in prod] + [0] * (len(shifted) - len(prod))
        assert prod[: len(shifted)] == shifted
        assert [x % p for x in H.g] == [0] * c.lam + [1]
        checked += 1


def test_log_product_examples():
    p = 5
    lin = hensel_distinguished_factor(P(-6, 1), p, 10)  # g = T - 5
    assert log_product(lin, 8).agreement(padic_log(PadicScalar.exact(6, 5, 9))) >= 8
    assert log_product(hensel_distinguished_factor(E5, 5, 12), 8).valuation == 1
    assert log_product(hensel_distinguished_factor(P(1, -18, 1), 2, 30), 8).valuation == 4


def test_sequence_oracle_examples():
    r = limit_sequence_oracle(FIG8, 7, 6)
    assert r.limit.residue(6) == 38179
    r = limit_sequence_oracle(E5, 5, 4)
    assert r.limit.is_zero() and r.nonp_limit.residue(4) == 321
    with pytest.raises(VanishingTowerError) as info:
        limit_sequence_oracle(P(-1, 1), 3, 4)
    assert info.value.level == 0


def test_limit_formula_examples():
    assert limit_formula(FIG8, 2, 8).limit.residue(8) == 3
    rep = limit_formula(E5, 5, 6)
    assert rep.limit_is_zero and rep.zero_reason == "lambda"
    for m, p in [(3, 3), (-3, 3), (6, 3), (5, 5), (10, 5), (7, 7)]:  # p | m, p odd
        f = P(m, 1 - 2 * m, m)
        assert limit_formula(f, p, 8).limit.residue(8) == 1


def test_cyclotomic_corollary():
    # f = Phi_m mod p with m = l^e gives l; otherwise 1
    cases = [(cyclotomic(9) + P(0, 5), 5, 3), (cyclotomic(4) + P(7, 7), 7, 2),
             (cyclotomic(6) + P(5, 5), 5, 1), (cyclotomic(25) + P(3), 3, 5)]
    for f, p, expected in cases:
        rep = compute_limit(f, p, 6, method="both")
        assert rep.corollary_m is not None
        assert rep.limit.residue(6) == expected


def test_nonp_examples():
    want = [1, 21, 71, 321, 1571, 14071]
    got = nonp_limit_formula(E5, 5, 6)
    assert [got.residue(n) for n in range(1, 7)] == want == oracle_nonp_residues(E5, 5, 6)
    got = nonp_limit_formula(E37, 37, 3)
    assert [got.residue(n) for n in (1, 2, 3)] == [1, 741, 13062]
    got = nonp_limit_formula(E125, 2, 10)
    assert [got.residue(n) for n in range(1, 11)] == [1, 1, 1, 1, 17, 17, 17, 145, 401, 401]


def test_iwasawa_examples():
    inv = iwasawa_invariants(E5, 5)
    assert (inv.lam, inv.mu, inv.nu) == (1, 0, 1)
    inv = iwasawa_invariants(E125, 2)
    assert (inv.lam, inv.mu, inv.nu) == (2, 0, 4)
    assert iwasawa_invariants(P(5, 5), 5).mu == 1


def random_polys(seed, count, p_choices=(2, 3, 5, 7)):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = IntPolynomial([rng.randint(-20, 20) for _ in range(rng.randint(1, 4))] + [rng.choice([1, -1, 2, 3, 5])])
        p = rng.choice(p_choices)
        try:
            limit_sequence_oracle(f, p, 1)
        except VanishingTowerError:
            continue
        out.append((f, p))
    return out


def test_norm_congruence():
    for f, p in random_polys(4, 40):
        if evaluate(f, 1) % p == 0:
            continue
        vals = cyclic_resultant_sequence(f, p, 4)
        for n in range(1, 5):
            # Res_n = Res_{n-1} * unit = Res_{n-1} mod p^n, both prime to p
            assert (vals[n] - vals[n - 1]) % p**n == 0


def test_invariant_law_past_stabilization():
    for f, p in random_polys(8, 40):
        inv = iwasawa_invariants(f, p)
        assert inv.stabilization_index is not None
        vals = cyclic_resultant_sequence(f, p, inv.checked_levels)
        for n in range(inv.stabilization_index, inv.checked_levels + 1):
            assert valuation(vals[n], p) == inv.lam * n + inv.mu * p**n + inv.nu


def test_h_circ_division_is_exact():
    for f, p in [(E5, 5), (E125, 2), (P(1, -18, 1), 2), (P(-1, 0, 1, 1), 2)]:
        c = classify_roots(f, p)
        N = 8
        mod = p**N
        H = list(teich_poly(f, p, N).coeffs)
        for _ in range(c.lam):
            H, r = _divmod_monic(H, [mod - 1, 1], mod)
            assert r == []


def test_shortcut_gives_nu_from_value_at_one():
    # |alpha^3 - 1|_2 = 1/4 < 1/2, so nu = v_2(f(1)) = 4
    f = P(1, -18, 1)
    assert iwasawa_invariants(f, 2).nu == valuation(evaluate(f, 1), 2) == 4


def test_both_engines_agree_on_small_corpus():
    for f, p in random_polys(21, 30):
        rep = compute_limit(f, p, 5, method="both")
        assert rep.agreement_digits >= 5
        assert rep.limit_is_zero == (evaluate(f, 1) % p == 0)


def test_mu_positive_reports():
    f = P(6, -3, 3)  # 3 (t^2 - t + 2)
    rep = compute_limit(f, 3, 6, method="both")
    assert rep.limit_is_zero and rep.zero_reason == "mu" and rep.invariants.mu == 1
    assert any("mu > 0" in n for n in rep.notes)


def test_cauchy_property():
    """Every reported limit agrees with each exact level-n value mod p^n."""
    for f, p in [(FIG8, 7), (FIG8, 3), (E5, 2), (E125, 3), (P(2, -3, 2), 2)]:
        N = 6
        rep = compute_limit(f, p, N)
        vals = cyclic_resultant_sequence(f, p, N)
        for n in range(1, N + 1):
            assert rep.limit.residue(n) == vals[n] % p**n


def test_bad_inputs():
    with pytest.raises(DomainError):
        compute_limit(P(), 5, 4)
    with pytest.raises(DomainError):
        compute_limit(E5, 6, 4)
    with pytest.raises(DomainError):
        compute_limit(E5, 5, 4, method="guess")
