"""JSON / CSV / markdown emission.  Values are exact: never floats, big integers as strings."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .exact_poly import IntPolynomial, format_polynomial
from .padic import PadicScalar


def exact_str(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, PadicScalar):
        return padic_text(x)
    return str(x)


def padic_json(x: PadicScalar | None):
    if x is None:
        return None
    if x.is_zero():
        return {"zero_to_precision": True, "p": x.p, "precision": x.valuation}
    return {
        "p": x.p,
        "valuation": x.valuation,
        "unit_digits": x.unit_digits(),
        "precision": x.precision,
        "residue": str(x.residue(x.absolute_precision)) if x.valuation >= 0 else None,
    }


def padic_text(x: PadicScalar) -> str:
    if x.is_zero():
        return f"0 + O({x.p}^{x.valuation})"
    A = x.absolute_precision
    if x.valuation >= 0:
        r = x.residue(A)
        s = x.signed_residue(A)
        shown = f"{r}" if s >= 0 or -s > 10**6 else f"{r} (= {s})"
        return f"{shown} + O({x.p}^{A})"
    return f"{x.unit} * {x.p}^{x.valuation} + O({x.p}^{A})"


def _jsonable(obj):
    if isinstance(obj, PadicScalar):
        return padic_json(obj)
    if isinstance(obj, IntPolynomial):
        return {"text": format_polynomial(obj), "coeffs": [str(c) for c in obj.coeffs]}
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        # structural integers stay numbers; values that can grow are strings at the source
        return int(obj)
    if isinstance(obj, Fraction):
        return exact_str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return str(obj)


def big(x) -> str:
    """Exact decimal string for a value that may exceed double precision."""
    return exact_str(x)


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2)


def limit_report_dict(rep) -> dict:
    inv = rep.invariants
    return {
        "polynomial": format_polynomial(rep.polynomial),
        "p": rep.p,
        "precision": rep.precision,
        "method": rep.method,
        "limit": padic_json(rep.limit),
        "limit_is_zero": rep.limit_is_zero,
        "zero_reason": rep.zero_reason,
        "nonp_limit": padic_json(rep.nonp_limit),
        "nonp_absent_reason": rep.nonp_absent_reason,
        "xi": padic_json(rep.xi),
        "lambda": inv.lam,
        "mu": inv.mu,
        "nu": inv.nu,
        "stabilization_index": inv.stabilization_index,
        "sign_exponent": rep.sign_exponent,
        "agreement_digits": rep.agreement_digits,
        "cyclotomic_index": rep.corollary_m,
        "notes": list(rep.notes),
    }


def limit_report_text(rep) -> str:
    inv = rep.invariants
    lines = [
        f"f = {format_polynomial(rep.polynomial)}, p = {rep.p}, N = {rep.precision}, method = {rep.method}",
        f"limit       : {padic_text(rep.limit)}" + (f"  [zero: {rep.zero_reason}]" if rep.limit_is_zero else ""),
        f"non-p limit : {padic_text(rep.nonp_limit) if rep.nonp_limit is not None else rep.nonp_absent_reason}",
        f"xi          : {padic_text(rep.xi)}",
        f"lambda, mu, nu = {inv.lam}, {inv.mu}, {inv.nu}"
        + (f"  (law holds from n = {inv.stabilization_index})" if inv.stabilization_index is not None else ""),
    ]
    if rep.agreement_digits is not None:
        lines.append(f"engines agree to {rep.agreement_digits} digits")
    if rep.corollary_m is not None:
        lines.append(f"f = Phi_{rep.corollary_m} mod p: limit is Phi_{rep.corollary_m}(1)")
    lines.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(lines)


def table_markdown(columns, rows) -> str:
    """rows: list of (label, values) with values aligned to columns."""
    head = "| n | " + " | ".join(exact_str(c) for c in columns) + " |"
    sep = "|---|" + "---|" * len(columns)
    body = [
        "| " + label + " | " + " | ".join("" if v is None else exact_str(v) for v in values) + " |"
        for label, values in rows
    ]
    return "\n".join([head, sep, *body])


def table_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", *columns])
    for label, values in rows:
        w.writerow([label, *("" if v is None else exact_str(v) for v in values)])
    return buf.getvalue()
