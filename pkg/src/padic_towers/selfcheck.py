"""Randomized formula-vs-oracle run.

Cases are drawn up front from one seeded generator, so the outcome depends
only on the seed and never on how many worker processes evaluate them.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import random

from .errors import TowerError, VanishingTowerError
from .exact_poly import IntPolynomial, evaluate
from .limits import limit_formula_value, limit_sequence_oracle, nonp_limit_formula


@dataclass
class CaseResult:
    index: int
    coeffs: tuple
    p: int
    status: str  # ok | vanishing | fail
    detail: str = ""


def draw_cases(count: int, seed: int, max_degree: int = 5, bound: int = 50,
               primes=(2, 3, 5, 7)):
    rng = random.Random(seed)
    cases = []
    for i in range(count):
        d = rng.randint(0, max_degree)
        coeffs = [rng.randint(-bound, bound) for _ in range(d)]
        coeffs.append(rng.choice([c for c in range(-bound, bound + 1) if c]))
        cases.append((i, tuple(coeffs), rng.choice(primes)))
    return cases


def check_case(case, N: int = 6) -> CaseResult:
    i, coeffs, p = case
    f = IntPolynomial(coeffs)
    try:
        oracle = limit_sequence_oracle(f, p, N)
    except VanishingTowerError as exc:
        return CaseResult(i, coeffs, p, "vanishing", str(exc))
    try:
        limit = limit_formula_value(f, p, N)[0]
        nonp = nonp_limit_formula(f, p, N)
    except TowerError as exc:
        return CaseResult(i, coeffs, p, "fail", f"formula engine: {exc}")
    problems = []
    if limit.agreement(oracle.limit) < N:
        problems.append(f"limit {limit} vs oracle {oracle.limit}")
    if nonp.agreement(oracle.nonp_limit) < N:
        problems.append(f"non-p {nonp} vs oracle {oracle.nonp_limit}")
    if limit.is_zero() != (evaluate(f, 1) % p == 0):
        problems.append("zero criterion")
    return CaseResult(i, coeffs, p, "fail" if problems else "ok", "; ".join(problems))


def run_selfcheck(count: int = 200, seed: int = 0, N: int = 6, jobs: int = 1) -> list[CaseResult]:
    cases = draw_cases(count, seed)
    if jobs <= 1:
        return [check_case(c, N) for c in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(check_case, cases, [N] * len(cases)))
