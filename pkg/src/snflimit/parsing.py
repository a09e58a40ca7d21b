"""Text format for series and JSON matrix documents.

Grammar (whitespace insignificant)::

    series   := sign? term (("+" | "-") term)*
    term     := coeff ("*" mono)? | mono
    mono     := "t" ("^" exponent)?
    exponent := integer | "(" integer "/" integer ")"
    coeff    := real | "(" real ("+" | "-") real "i" ")"
    real     := decimal literal, optional exponent part

A leading sign on the first term is accepted in addition to the bare grammar.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import EmptyInput, RamificationMismatch, SeriesSyntaxError, ShapeMismatch
from .series import DEFAULT_PRECISION, LaurentSeries, SeriesMatrix

_REAL = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"[+-]?\d+")


class _Parser:
    def __init__(self, text: str, ramification: int):
        self.text = text
        self.k = ramification
        self.pos = 0
        # reported only once the whole string is known to be well formed
        self.mismatch: str | None = None

    def fail(self, message: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        offset = len(self.text[:pos].encode("utf-8"))
        raise SeriesSyntaxError(message, offset, self.text)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.fail(f"expected {ch!r}, found {found}")
        self.pos += 1

    def match(self, pattern: re.Pattern, what: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def series(self) -> dict[int, complex]:
        terms: dict[int, complex] = {}
        sign = 1.0
        ch = self.peek()
        if ch and ch in "+-":
            sign = -1.0 if ch == "-" else 1.0
            self.pos += 1
        while True:
            exp, coeff = self.term()
            terms[exp] = terms.get(exp, 0j) + sign * coeff
            ch = self.peek()
            if ch == "":
                return terms
            if ch not in "+-":
                self.fail(f"unexpected {ch!r}")
            sign = -1.0 if ch == "-" else 1.0
            self.pos += 1

    def term(self) -> tuple[int, complex]:
        ch = self.peek()
        if ch == "t":
            return self.mono(), 1.0 + 0j
        coeff = self.coeff()
        if self.peek() == "*":
            self.pos += 1
            if self.peek() != "t":
                self.fail("expected 't' after '*'")
            return self.mono(), coeff
        return 0, coeff

    def coeff(self) -> complex:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            re_part = float(self.match(_REAL, "real part"))
            op = self.peek()
            if op not in ("+", "-"):
                self.fail("expected '+' or '-' in complex coefficient")
            self.pos += 1
            im_part = float(self.match(_REAL, "imaginary part"))
            self.expect("i")
            self.expect(")")
            return complex(re_part, im_part if op == "+" else -im_part)
        if ch == "":
            self.fail("unexpected end of input, expected a term")
        return complex(float(self.match(_REAL, "a coefficient or 't'")))

    def mono(self) -> int:
        self.expect("t")
        if self.peek() != "^":
            return self.k
        self.pos += 1
        if self.peek() == "(":
            start = self.pos
            self.pos += 1
            num = int(self.match(_INT, "integer numerator"))
            self.expect("/")
            den = int(self.match(_INT, "integer denominator"))
            self.expect(")")
            if den <= 0:
                self.fail("exponent denominator must be positive", start)
            exp = Fraction(num, den)
            if (exp * self.k).denominator != 1:
                if self.mismatch is None:
                    self.mismatch = (
                        f"exponent {exp} needs a ramification divisible by {exp.denominator}, declared {self.k}"
                    )
                return 0
            return int(exp * self.k)
        return int(self.match(_INT, "integer exponent")) * self.k


def parse_series(text: str, ramification: int = 1, precision: int = DEFAULT_PRECISION) -> LaurentSeries:
    if ramification < 1:
        raise RamificationMismatch("ramification must be a positive integer")
    if not text.strip():
        raise EmptyInput("empty series expression")
    parser = _Parser(text, ramification)
    terms = parser.series()
    if parser.mismatch is not None:
        raise RamificationMismatch(parser.mismatch)
    return LaurentSeries.from_terms(terms, ramification, precision)


def _format_real(x: float) -> str:
    r = repr(float(x))
    if r in ("inf", "nan", "-inf"):
        raise ValueError(f"cannot print non-finite coefficient {x}")
    return r


def _format_exponent(num: int, k: int) -> str:
    e = Fraction(num, k)
    if e.denominator == 1:
        return "" if e == 1 else f"^{e.numerator}"
    return f"^({e.numerator}/{e.denominator})"


def format_series(s: LaurentSeries) -> str:
    """Inverse of :func:`parse_series` on the nonzero terms (precision is not encoded)."""
    if s.is_zero:
        return "0"
    parts: list[str] = []
    for j, c in enumerate(s.coefficients):
        if c == 0:
            continue
        num = s.lead_exponent + j
        negative = c.real < 0
        c = -c if negative else c
        if c.imag == 0:
            body = _format_real(c.real)
        else:
            op = "-" if c.imag < 0 else "+"
            body = f"({_format_real(c.real + 0.0)}{op}{_format_real(abs(c.imag))}i)"
        if num != 0:
            mono = "t" + _format_exponent(num, s.ramification)
            body = mono if body == "1.0" else f"{body}*{mono}"
        if parts:
            parts.append(("- " if negative else "+ ") + body)
        else:
            parts.append(("-" if negative else "") + body)
    return " ".join(parts)


def parse_matrix(doc: dict[str, Any], precision: int = DEFAULT_PRECISION) -> SeriesMatrix:
    """Build a :class:`SeriesMatrix` from ``{"n", "ramification", "entries"}``."""
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ShapeMismatch("matrix document must be an object with an 'entries' array")
    entries = doc["entries"]
    n = doc.get("n", len(entries) if isinstance(entries, list) else None)
    k = doc.get("ramification", 1)
    if not isinstance(n, int) or n < 1:
        raise ShapeMismatch(f"'n' must be a positive integer, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise RamificationMismatch(f"'ramification' must be a positive integer, got {k!r}")
    if not isinstance(entries, list) or len(entries) != n or any(
        not isinstance(row, list) or len(row) != n for row in entries
    ):
        raise ShapeMismatch(f"'entries' must be a {n}x{n} array of strings")
    rows = []
    for i, row in enumerate(entries):
        out = []
        for j, text in enumerate(row):
            if not isinstance(text, str):
                raise ShapeMismatch(f"entry ({i}, {j}) must be a string")
            try:
                out.append(parse_series(text, k, precision))
            except SeriesSyntaxError as exc:
                raise exc.at_entry(i, j) from None
            except (EmptyInput, RamificationMismatch) as exc:
                raise type(exc)(f"entry ({i}, {j}): {exc}") from None
        rows.append(tuple(out))
    return SeriesMatrix(tuple(rows))


def matrix_document(a: SeriesMatrix) -> dict[str, Any]:
    return {
        "n": a.n,
        "ramification": a.ramification,
        "entries": [[format_series(s) for s in row] for row in a.entries],
    }


def load_matrix(path: str | Path, precision: int = DEFAULT_PRECISION) -> SeriesMatrix:
    return parse_matrix(_load_json(path), precision)


def parse_vector(doc: dict[str, Any], precision: int = DEFAULT_PRECISION) -> list[LaurentSeries]:
    """``{"ramification": k, "entries": [series, ...]}``, the input of ``trop``."""
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise ShapeMismatch("vector document must be an object with an 'entries' list")
    k = doc.get("ramification", 1)
    if not isinstance(k, int) or k < 1:
        raise RamificationMismatch(f"'ramification' must be a positive integer, got {k!r}")
    out = []
    for i, text in enumerate(doc["entries"]):
        if not isinstance(text, str):
            raise ShapeMismatch(f"entry {i} must be a string")
        try:
            out.append(parse_series(text, k, precision))
        except SeriesSyntaxError as exc:
            raise exc.at_entry(i, 0) from None
    return out


def load_vector(path: str | Path, precision: int = DEFAULT_PRECISION) -> list[LaurentSeries]:
    return parse_vector(_load_json(path), precision)


def _load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ShapeMismatch(f"{path}: invalid JSON ({exc})") from None
