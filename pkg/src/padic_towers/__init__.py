"""Exact cyclic resultants Res(t^n - 1, f) and their p-adic limits along p^n towers."""

from .errors import (
    DomainError,
    InvariantViolation,
    PolynomialSyntaxError,
    PrecisionError,
    TableMismatch,
    TowerError,
    VanishingTowerError,
)
from .exact_poly import (
    IntPolynomial,
    cyclic_resultant,
    cyclic_resultant_sequence,
    cyclotomic,
    format_polynomial,
    power_transform,
    resultant,
)
from .limits import compute_limit, iwasawa_invariants
from .padic import PadicScalar
from .parse import parse_polynomial

__version__ = "0.1.0"
