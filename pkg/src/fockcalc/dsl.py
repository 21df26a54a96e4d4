"""Text syntax for symbols and polynomials.

Grammar (whitespace is ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*
    factor := rational | 'i' | '(' gaussian ')' | 'z' ['^' int]
            | 'zb' ['^' int] | '|z|^' int

``z̄`` (z followed by a combining macron) is accepted for ``zb``, and
``|z|^2s`` expands to ``z^s*zb^s``.
"""

from __future__ import annotations

from fractions import Fraction

from .calculus import AnalyticPoly, MixedSymbol
from .scalar import GaussianRational

__all__ = ["DSLSyntaxError", "parse_symbol", "parse_poly", "format_symbol", "format_poly"]

_MACRON = "̄"
# exact factorials grow fast; anything past this is a typo, not a computation
MAX_EXPONENT = 1000


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}: {text!r}\n{' ' * (pos + 1)}^")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message, pos=None):
        raise DSLSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, s: str) -> bool:
        self.skip_ws()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.peek() == "-":
            self.error("negative exponents are not allowed")
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def exponent(self) -> int:
        if not self.accept("^"):
            return 1
        self.skip_ws()
        start = self.pos
        value = self.integer()
        if value > MAX_EXPONENT:
            self.error(f"exponent exceeds {MAX_EXPONENT}", start)
        return value

    def parse(self) -> dict[tuple[int, int], GaussianRational]:
        terms: dict[tuple[int, int], GaussianRational] = {}
        if not self.peek():
            self.error("empty expression")
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        while True:
            coeff, key = self.term()
            terms[key] = terms.get(key, GaussianRational(0)) + coeff * sign
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            elif self.peek():
                self.error(f"unexpected character {self.peek()!r}")
            else:
                return terms

    def term(self):
        coeff = GaussianRational(1)
        p = n = 0
        seen = False
        while True:
            ch = self.peek()
            if not ch or ch in "+-)":
                break
            if seen and ch == "*":
                self.pos += 1
                ch = self.peek()
                if not ch or ch in "+-)":
                    self.error("dangling '*'")
            factor = self.factor()
            seen = True
            if isinstance(factor, tuple):
                p += factor[0]
                n += factor[1]
            else:
                coeff = coeff * factor
        if not seen:
            self.error("expected a term")
        return coeff, (p, n)

    def factor(self):
        start = self.pos
        ch = self.peek()
        if ch.isdigit():
            num = Fraction(self.integer())
            if self.accept("/"):
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", start)
                num /= den
            return GaussianRational(num)
        if ch == "(":
            close = self.text.find(")", self.pos)
            if close < 0:
                self.error("unbalanced parenthesis")
            inner = self.text[self.pos + 1:close]
            try:
                value = GaussianRational.parse(inner)
            except ValueError:
                self.error("bad coefficient literal", self.pos + 1)
            self.pos = close + 1
            return value
        if self.accept("|z|"):
            if not self.accept("^"):
                self.error("expected '^' after |z|")
            e = self.integer()
            if e > 2 * MAX_EXPONENT:
                self.error(f"exponent exceeds {2 * MAX_EXPONENT}", start)
            if e % 2:
                self.error("|z| exponent must be even", start)
            return (e // 2, e // 2)
        if self.accept("zb") or self.accept("z" + _MACRON):
            return (0, self.exponent())
        if self.accept("z"):
            return (self.exponent(), 0)
        if self.accept("i"):
            return GaussianRational(0, 1)
        self.error(f"unexpected character {ch!r}")


def parse_symbol(text: str) -> MixedSymbol:
    return MixedSymbol(_Parser(text).parse())


def parse_poly(text: str) -> AnalyticPoly:
    parsed = _Parser(text).parse()
    out = {}
    for (p, n), c in parsed.items():
        if n and c:
            raise DSLSyntaxError("polynomial must be analytic (no zb factors)", text, 0)
        out[p] = out.get(p, GaussianRational(0)) + c
    return AnalyticPoly(out)


def _monomial(p: int, n: int) -> str:
    parts = []
    if p:
        parts.append("z" if p == 1 else f"z^{p}")
    if n:
        parts.append("zb" if n == 1 else f"zb^{n}")
    return "*".join(parts)


def _format_terms(items) -> str:
    pieces: list[str] = []
    for (p, n), c in items:
        mono = _monomial(p, n)
        negative = (c.im == 0 and c.re < 0) or (c.re == 0 and c.im < 0)
        mag = -c if negative else c
        if mag.re != 0 and mag.im != 0:
            coeff = f"({mag})"
        else:
            coeff = str(mag)
        if mono:
            body = mono if mag == 1 else f"{coeff}*{mono}"
        else:
            body = coeff
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"{'-' if negative else '+'} {body}")
    return " ".join(pieces) if pieces else "0"


def format_symbol(phi: MixedSymbol) -> str:
    return _format_terms(phi.items())


def format_poly(f: AnalyticPoly) -> str:
    return _format_terms(((k, 0), c) for k, c in f.items())
