"""Truncated Laurent / Puiseux series with complex float coefficients.

A nonzero series is stored as ``sum_j c_j t^((m + j)/k)`` for ``j < N`` where
``m`` is the lead exponent, ``k`` the ramification and ``N`` the number of
retained coefficients.  Terms from exponent ``(m + N)/k`` onwards are unknown,
not zero.  The leading coefficient of a nonzero series is never zero, so the
lead exponent is always the true valuation.

The zero series has no coefficients and is treated as exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisionByZeroSeries, OrdOfZero, PrecisionExhausted, ShapeMismatch

DEFAULT_PRECISION = 40
# computed coefficient snapped to zero when |c| <= SNAP_RTOL * (sum of |contributions|)
SNAP_RTOL = 1e-14


@dataclass(frozen=True)
class LaurentSeries:
    coefficients: tuple[complex, ...]
    lead_exponent: int = 0
    ramification: int = 1

    def __post_init__(self) -> None:
        if self.ramification < 1:
            raise ValueError("ramification must be >= 1")
        coeffs = tuple(complex(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if coeffs and coeffs[0] == 0:
            raise ValueError("nonzero series must have a nonzero leading coefficient")
        if not coeffs and self.lead_exponent != 0:
            object.__setattr__(self, "lead_exponent", 0)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ramification: int = 1) -> "LaurentSeries":
        return cls((), 0, ramification)

    @classmethod
    def monomial(
        cls,
        exponent: Fraction | int,
        coefficient: complex = 1.0,
        ramification: int = 1,
        precision: int = DEFAULT_PRECISION,
    ) -> "LaurentSeries":
        """``coefficient * t**exponent`` with ``precision`` known terms."""
        if coefficient == 0:
            return cls.zero(ramification)
        scaled = Fraction(exponent) * ramification
        if scaled.denominator != 1:
            raise ValueError(f"exponent {exponent} not representable at ramification {ramification}")
        coeffs = [0j] * precision
        coeffs[0] = complex(coefficient)
        return cls(tuple(coeffs), int(scaled), ramification)

    @classmethod
    def from_terms(
        cls,
        terms: dict[int, complex],
        ramification: int = 1,
        precision: int = DEFAULT_PRECISION,
    ) -> "LaurentSeries":
        """Build from ``{exponent numerator: coefficient}`` in units of ``1/ramification``.

        The window is widened beyond ``precision`` if needed so that no given
        term falls into the unknown tail.
        """
        nonzero = {e: complex(c) for e, c in terms.items() if c != 0}
        if not nonzero:
            return cls.zero(ramification)
        lo, hi = min(nonzero), max(nonzero)
        size = max(precision, hi - lo + 1)
        coeffs = np.zeros(size, dtype=complex)
        for e, c in nonzero.items():
            coeffs[e - lo] = c
        return cls(tuple(coeffs), lo, ramification)

    # -- basic properties ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def precision(self) -> int:
        return len(self.coefficients)

    @property
    def window_end(self) -> int | None:
        """First unknown exponent numerator (``m + N``); ``None`` for exact zero."""
        if self.is_zero:
            return None
        return self.lead_exponent + len(self.coefficients)

    def ord(self) -> Fraction:
        return ord_t(self)

    def array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    def lift(self, ramification: int) -> "LaurentSeries":
        """Re-express over ``t^(1/ramification)``; must be a multiple of the current one."""
        if ramification == self.ramification:
            return self
        if ramification % self.ramification:
            raise ValueError("can only lift to a multiple of the current ramification")
        if self.is_zero:
            return LaurentSeries.zero(ramification)
        f = ramification // self.ramification
        out = np.zeros(self.precision * f, dtype=complex)
        out[::f] = self.coefficients
        return LaurentSeries(tuple(out), self.lead_exponent * f, ramification)

    def shifted(self, exponent: Fraction | int) -> "LaurentSeries":
        """Multiply by ``t**exponent``."""
        if self.is_zero:
            return self
        step = Fraction(exponent) * self.ramification
        if step.denominator != 1:
            raise ValueError(f"shift {exponent} not representable at ramification {self.ramification}")
        return LaurentSeries(self.coefficients, self.lead_exponent + int(step), self.ramification)

    def scaled(self, factor: complex) -> "LaurentSeries":
        if factor == 0 or self.is_zero:
            return LaurentSeries.zero(self.ramification)
        return LaurentSeries(tuple(c * factor for c in self.coefficients), self.lead_exponent, self.ramification)

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Dense coefficients for exponent numerators ``lo .. hi-1`` (zeros outside the stored range)."""
        out = np.zeros(max(hi - lo, 0), dtype=complex)
        if self.is_zero or hi <= lo:
            return out
        start = max(lo, self.lead_exponent)
        stop = min(hi, self.window_end)
        if stop > start:
            out[start - lo : stop - lo] = self.coefficients[start - self.lead_exponent : stop - self.lead_exponent]
        return out

    # -- operators ----------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return add(self, other)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return add(self, -other)

    def __neg__(self) -> "LaurentSeries":
        return self.scaled(-1.0)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        return mul(self, other)

    def __repr__(self) -> str:
        if self.is_zero:
            return "LaurentSeries(0)"
        return (
            f"LaurentSeries(lead={self.lead_exponent}/{self.ramification}, "
            f"N={self.precision}, c0={self.coefficients[0]!r})"
        )


def _common_ramification(series: Iterable[LaurentSeries]) -> int:
    return reduce(math.lcm, (s.ramification for s in series), 1)


def _normalize(coeffs: np.ndarray, lead: int, ramification: int) -> LaurentSeries:
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        raise PrecisionExhausted(
            "all known coefficients cancelled; cannot certify zero or nonzero",
            bound=Fraction(lead + len(coeffs), ramification),
        )
    first = int(nz[0])
    return LaurentSeries(tuple(coeffs[first:]), lead + first, ramification)


def ord_t(s: LaurentSeries) -> Fraction:
    """Order of vanishing at ``t = 0``: ``lead_exponent / ramification``."""
    if s.is_zero:
        raise OrdOfZero()
    return Fraction(s.lead_exponent, s.ramification)


def series_sum(terms: Sequence[LaurentSeries]) -> LaurentSeries:
    """Sum of several series in one pass.

    Summing all terms at once (rather than pairwise) means an intermediate
    partial sum can never trigger :class:`PrecisionExhausted` on its own.
    """
    live = [s for s in terms if not s.is_zero]
    k = _common_ramification(terms)
    if not live:
        return LaurentSeries.zero(k)
    if len(live) == 1:
        return live[0].lift(k)
    live = [s.lift(k) for s in live]
    lo = min(s.lead_exponent for s in live)
    hi = min(s.window_end for s in live)
    acc = np.zeros(hi - lo, dtype=complex)
    mag = np.zeros(hi - lo)
    for s in live:
        seg = s.window(lo, hi)
        acc += seg
        mag += np.abs(seg)
    acc[np.abs(acc) <= SNAP_RTOL * mag] = 0
    return _normalize(acc, lo, k)


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return series_sum((a, b))


def mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Cauchy product truncated to the smaller relative precision."""
    k = _common_ramification((a, b))
    if a.is_zero or b.is_zero:
        return LaurentSeries.zero(k)
    a, b = a.lift(k), b.lift(k)
    n = min(a.precision, b.precision)
    x, y = a.array()[:n], b.array()[:n]
    prod = np.convolve(x, y)[:n]
    mag = np.convolve(np.abs(x), np.abs(y))[:n]
    prod[np.abs(prod) <= SNAP_RTOL * mag] = 0
    return _normalize(prod, a.lead_exponent + b.lead_exponent, k)


def unit_part(s: LaurentSeries) -> LaurentSeries:
    """``s`` shifted to lead exponent 0, so that ``s = t**ord(s) * unit_part(s)``."""
    if s.is_zero:
        raise DivisionByZeroSeries("unit part of the zero series")
    return LaurentSeries(s.coefficients, 0, s.ramification)


def inverse(s: LaurentSeries) -> LaurentSeries:
    if s.is_zero:
        raise DivisionByZeroSeries("inverse of the zero series")
    c = s.array()
    n = len(c)
    b = np.zeros(n, dtype=complex)
    b[0] = 1.0 / c[0]
    for j in range(1, n):
        b[j] = -np.dot(c[1 : j + 1], b[j - 1 :: -1]) * b[0]
    return LaurentSeries(tuple(b), -s.lead_exponent, s.ramification)


def evaluate(s: LaurentSeries, t: float) -> complex:
    """Sum the retained terms at a real ``t > 0``, smallest magnitude first."""
    if s.is_zero:
        return 0j
    exps = (s.lead_exponent + np.arange(s.precision)) / s.ramification
    with np.errstate(under="ignore", over="ignore"):
        terms = s.array() * np.power(float(t), exps)
    terms = terms[np.argsort(np.abs(terms), kind="stable")]
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


@dataclass(frozen=True)
class SeriesMatrix:
    """Square matrix of series sharing one ramification."""

    entries: tuple[tuple[LaurentSeries, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ShapeMismatch(f"matrix must be square and nonempty, got row lengths {[len(r) for r in rows]}")
        k = _common_ramification(s for r in rows for s in r)
        rows = tuple(tuple(s.lift(k) for s in r) for r in rows)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, n: int, ramification: int = 1, precision: int = DEFAULT_PRECISION) -> "SeriesMatrix":
        return cls.diagonal([0] * n, ramification, precision)

    @classmethod
    def diagonal(
        cls, exponents: Sequence[Fraction | int], ramification: int = 1, precision: int = DEFAULT_PRECISION
    ) -> "SeriesMatrix":
        n = len(exponents)
        zero = LaurentSeries.zero(ramification)
        return cls(
            tuple(
                tuple(
                    LaurentSeries.monomial(exponents[i], 1.0, ramification, precision) if i == j else zero
                    for j in range(n)
                )
                for i in range(n)
            )
        )

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def ramification(self) -> int:
        return self.entries[0][0].ramification

    def __getitem__(self, ij: tuple[int, int]) -> LaurentSeries:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        n = self.n
        if other.n != n:
            raise ShapeMismatch("dimension mismatch in matrix product")
        return SeriesMatrix(
            tuple(
                tuple(series_sum([mul(self[i, l], other[l, j]) for l in range(n)]) for j in range(n))
                for i in range(n)
            )
        )

    def evaluate(self, t: float) -> np.ndarray:
        return evaluate_matrix(self, t)

    def determinant(self) -> LaurentSeries:
        return determinant(self)


def evaluate_matrix(a: SeriesMatrix, t: float) -> np.ndarray:
    return np.array([[evaluate(s, t) for s in row] for row in a.entries], dtype=complex)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def leibniz_determinant(rows: Sequence[Sequence[LaurentSeries]]) -> LaurentSeries:
    """Determinant by full permutation expansion; products never cancel, only the final sum can.

    Cost is n! products, fine for the n <= 6 matrices this is used on.
    """
    n = len(rows)
    terms = []
    for perm in permutations(range(n)):
        factors = [rows[i][perm[i]] for i in range(n)]
        if any(f.is_zero for f in factors):
            continue
        prod = reduce(mul, factors)
        terms.append(prod if _perm_sign(perm) > 0 else -prod)
    if not terms:
        return LaurentSeries.zero(_common_ramification(s for r in rows for s in r))
    return series_sum(terms)


def determinant(a: SeriesMatrix) -> LaurentSeries:
    return leibniz_determinant(a.entries)
