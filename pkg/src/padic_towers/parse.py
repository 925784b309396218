"""Polynomial text grammar.

    poly  := 'coeffs=[' int (',' int)* ']'  |  term (('+'|'-') term)*
    term  := ['+'|'-'] [int ['*']] ['t' ['^' int]]

Terms may come in any order; repeated exponents are summed.  Whitespace is
ignored.  Errors report the 0-based character position.
"""

from __future__ import annotations

import re

from .errors import PolynomialSyntaxError
from .exact_poly import IntPolynomial, format_polynomial

_COEFFS = re.compile(r"\s*coeffs\s*=\s*\[(.*)\]\s*$", re.S)


def _parse_coeff_list(text: str, offset: int) -> IntPolynomial:
    body = text
    if not body.strip():
        raise PolynomialSyntaxError("empty coefficient list", offset)
    out = []
    pos = offset
    for part in body.split(","):
        item = part.strip()
        if not re.fullmatch(r"[+-]?\d+", item):
            raise PolynomialSyntaxError(f"bad coefficient {item!r}", pos + len(part) - len(part.lstrip()))
        out.append(int(item))
        pos += len(part) + 1
    return IntPolynomial(out)


class _Scanner:
    def __init__(self, text: str, var: str):
        self.text = text
        self.var = var
        self.i = 0

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def integer(self):
        self.skip()
        j = self.i
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.i:
            return None
        value = int(self.text[self.i:j])
        self.i = j
        return value

    def error(self, message):
        raise PolynomialSyntaxError(message, self.i)


def parse_polynomial(text: str, var: str = "t") -> IntPolynomial:
    m = _COEFFS.match(text)
    if m:
        return _parse_coeff_list(m.group(1), m.start(1))
    sc = _Scanner(text, var)
    if not sc.peek():
        sc.error("empty polynomial")
    terms: dict[int, int] = {}
    first = True
    while sc.peek():
        sign = 1
        if sc.take("-"):
            sign = -1
        elif sc.take("+"):
            pass
        elif not first:
            sc.error(f"expected '+' or '-', found {sc.peek()!r}")
        first = False
        coeff = sc.integer()
        has_coeff = coeff is not None
        if has_coeff:
            sc.take("*")
        if sc.take(var):
            exp = 1
            if sc.take("^"):
                exp = sc.integer()
                if exp is None:
                    sc.error("expected exponent")
        elif has_coeff:
            exp = 0
        else:
            sc.error(f"expected a coefficient or {var!r}")
        value = sign * (coeff if has_coeff else 1)
        terms[exp] = terms.get(exp, 0) + value
    if not terms:
        sc.error("empty polynomial")
    coeffs = [0] * (max(terms) + 1)
    for e, c in terms.items():
        coeffs[e] += c
    return IntPolynomial(coeffs)


def format_for_cli(f: IntPolynomial) -> str:
    return format_polynomial(f)
