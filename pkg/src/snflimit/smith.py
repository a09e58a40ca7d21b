"""Smith normal form over the power-series ring C[[t]] (or C[[t^(1/k)]]).

``smith_normal_form`` factors ``A = P diag(t^v) Q`` with ``P``, ``Q`` invertible
over the valuation ring.  ``minor_valuation_oracle`` recomputes ``v`` from the
valuations of all minors and shares no code path with the elimination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Literal

import numpy as np

from .errors import PrecisionExhausted, SingularInput
from .series import (
    LaurentSeries,
    SeriesMatrix,
    determinant,
    inverse,
    leibniz_determinant,
    mul,
    ord_t,
    series_sum,
    unit_part,
)

VERIFY_TOL = 1e-10


@dataclass(frozen=True)
class SmithDecomposition:
    """``A = P diag(t^v) Q`` for all terms of order below ``valid_below``.

    Elimination replaces entries by exact zeros and exact powers of t; each
    replacement is only justified up to the end of that entry's known window,
    and ``valid_below`` is the least such end (``None`` when nothing was cut).
    """

    p: SeriesMatrix
    exponents: tuple[Fraction, ...]
    q: SeriesMatrix
    valid_below: Fraction | None = None

    @property
    def descending(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.exponents, reverse=True))

    def tau(self) -> SeriesMatrix:
        return SeriesMatrix.diagonal(self.exponents, self.p.ramification)


EPS = float(np.finfo(float).eps)
# A leading working coefficient is treated as rounding residue when it is within
# this factor of its propagated first-order error estimate.
ERR_SAFETY = 64.0


def _snap(coeffs: np.ndarray, err: np.ndarray, lead: int, k: int) -> tuple[LaurentSeries, np.ndarray]:
    """Strip leading rounding residue.  Only the lead decides ord, so interior
    coefficients are left untouched."""
    nz = np.flatnonzero(np.abs(coeffs) > ERR_SAFETY * err)
    if nz.size == 0:
        raise PrecisionExhausted(
            "all known coefficients cancelled; cannot certify zero or nonzero",
            bound=Fraction(lead + len(coeffs), k),
        )
    first = int(nz[0])
    return LaurentSeries(tuple(coeffs[first:]), lead + first, k), err[first:]


def _tracked_mul(a: LaurentSeries, ea: np.ndarray, b: LaurentSeries, eb: np.ndarray) -> tuple[LaurentSeries, np.ndarray]:
    n = min(a.precision, b.precision)
    x, y = a.array()[:n], b.array()[:n]
    ax, ay = np.abs(x), np.abs(y)
    prod = np.convolve(x, y)[:n]
    err = (np.convolve(ax, eb[:n]) + np.convolve(ea[:n], ay) + n * EPS * np.convolve(ax, ay))[:n]
    return _snap(prod, err, a.lead_exponent + b.lead_exponent, a.ramification)


def _tracked_add(
    y: LaurentSeries, ey: np.ndarray, x: LaurentSeries, ex: np.ndarray
) -> tuple[LaurentSeries, np.ndarray]:
    if y.is_zero:
        return x, ex
    lo = min(y.lead_exponent, x.lead_exponent)
    hi = min(y.window_end, x.window_end)
    wy, wx = y.window(lo, hi), x.window(lo, hi)
    err = EPS * (np.abs(wy) + np.abs(wx))
    for s, es in ((y, ey), (x, ex)):
        start, stop = s.lead_exponent - lo, min(hi, s.window_end) - lo
        if stop > start:
            err[start:stop] += es[: stop - start]
    return _snap(wy + wx, err, lo, y.ramification)


def _inverse_error(u: LaurentSeries, eu: np.ndarray, u_inv: LaurentSeries) -> np.ndarray:
    """First-order error of ``inverse(u)``: ``d(1/u) = -du / u^2``, with the
    recurrence's own rounding charged as a relative perturbation of ``u``."""
    n = u.precision
    b = np.abs(u_inv.array())
    du = eu[:n] + n * EPS * np.abs(u.array())
    return np.convolve(b, np.convolve(b, du)[:n])[:n]


class _Elimination:
    """Mutable working state; P and Q are kept so that ``A = P W Q`` at every step.

    Each working entry carries a per-coefficient rounding-error estimate
    (``ws``) so that residue from earlier steps is recognised as zero rather
    than read as a low-order term.
    """

    def __init__(self, a: SeriesMatrix):
        n = a.n
        self.n = n
        self.k = a.ramification
        self.w = [list(row) for row in a.entries]
        self.ws = [[EPS * np.abs(e.array()) for e in row] for row in a.entries]
        ident = SeriesMatrix.identity(n, self.k).entries
        self.p = [list(row) for row in ident]
        self.q = [list(row) for row in ident]
        self.dropped: Fraction | None = None
        self.valid_below: Fraction | None = None

    def cut(self, entry: LaurentSeries) -> None:
        """Record that ``entry`` is being replaced by an exact value."""
        if not entry.is_zero:
            self.cut_at(Fraction(entry.window_end, self.k))

    def cut_at(self, bound: Fraction) -> None:
        if self.valid_below is None or bound < self.valid_below:
            self.valid_below = bound

    def _axpy(self, y: LaurentSeries, c: LaurentSeries, x: LaurentSeries) -> LaurentSeries:
        """``y + c*x`` for the untracked P, Q updates."""
        try:
            return series_sum([y, mul(c, x)])
        except PrecisionExhausted as exc:
            self.cut_at(exc.bound)
            return LaurentSeries.zero(self.k)

    def _update(self, i: int, col: int, c: LaurentSeries, sc: np.ndarray, s: int) -> None:
        """``W[i][col] += c * W[s][col]`` with error tracking."""
        x, sx = self.w[s][col], self.ws[s][col]
        if x.is_zero:
            return
        try:
            prod, sp = _tracked_mul(c, sc, x, sx)
            self.w[i][col], self.ws[i][col] = _tracked_add(self.w[i][col], self.ws[i][col], prod, sp)
        except PrecisionExhausted as exc:
            if self.dropped is None or exc.bound < self.dropped:
                self.dropped = exc.bound
            self.cut_at(exc.bound)
            self.w[i][col], self.ws[i][col] = LaurentSeries.zero(self.k), np.zeros(0)

    def pick_pivot(self, s: int) -> tuple[int, int] | None:
        best, best_key = None, None
        for i in range(s, self.n):
            for j in range(s, self.n):
                e = self.w[i][j]
                if e.is_zero:
                    continue
                key = (e.lead_exponent, -abs(e.coefficients[0]))
                if best_key is None or key < best_key:
                    best, best_key = (i, j), key
        return best

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.w[i], self.w[j] = self.w[j], self.w[i]
        self.ws[i], self.ws[j] = self.ws[j], self.ws[i]
        for row in self.p:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in (*self.w, *self.ws):
            row[i], row[j] = row[j], row[i]
        self.q[i], self.q[j] = self.q[j], self.q[i]

    def normalize_pivot(self, s: int) -> int:
        piv = self.w[s][s]
        u = unit_part(piv)
        u_inv = inverse(u)
        s_inv = _inverse_error(u, self.ws[s][s], u_inv)
        for c in range(s + 1, self.n):
            if self.w[s][c].is_zero:
                continue
            self.w[s][c], self.ws[s][c] = _tracked_mul(self.w[s][c], self.ws[s][c], u_inv, s_inv)
        self.cut(piv)
        self.w[s][s] = LaurentSeries.monomial(Fraction(piv.lead_exponent, self.k), 1.0, self.k, piv.precision)
        self.ws[s][s] = np.zeros(piv.precision)
        for row in self.p:
            row[s] = mul(row[s], u)
        return piv.lead_exponent

    def clear(self, s: int, lead: int) -> None:
        n, zero = self.n, LaurentSeries.zero(self.k)
        shift = Fraction(-lead, self.k)
        for i in range(s + 1, n):
            if self.w[i][s].is_zero:
                continue
            c = self.w[i][s].shifted(shift)
            sc = self.ws[i][s]
            for col in range(s + 1, n):
                self._update(i, col, -c, sc, s)
            self.cut(self.w[i][s])
            self.w[i][s], self.ws[i][s] = zero, np.zeros(0)
            for row in self.p:
                row[s] = self._axpy(row[s], c, row[i])
        for j in range(s + 1, n):
            if self.w[s][j].is_zero:
                continue
            c = self.w[s][j].shifted(shift)
            self.cut(self.w[s][j])
            self.w[s][j], self.ws[s][j] = zero, np.zeros(0)
            self.q[s] = [self._axpy(self.q[s][col], c, self.q[j][col]) for col in range(n)]


def smith_normal_form(a: SeriesMatrix) -> SmithDecomposition:
    """Valuation-pivot elimination.

    Each round moves an entry of minimal order (largest constant term of its
    unit part on ties) to the pivot, scales its row so the pivot is exactly a
    power of t, then clears its row and column.  Entries whose whole known
    window cancels are set to zero; this is only accepted if the lost window
    ends above the largest exponent, since a perturbation of higher order
    cannot change the invariant factors.
    """
    st = _Elimination(a)
    leads = []
    for s in range(st.n):
        pos = st.pick_pivot(s)
        if pos is None:
            if st.dropped is not None:
                raise PrecisionExhausted(
                    f"remaining entries cancelled within their known windows (up to t^{st.dropped})",
                    bound=st.dropped,
                )
            raise SingularInput(f"all remaining entries are zero at elimination stage {s + 1}")
        st.swap_rows(s, pos[0])
        st.swap_cols(s, pos[1])
        lead = st.normalize_pivot(s)
        st.clear(s, lead)
        leads.append(lead)

    exps = [Fraction(m, st.k) for m in leads]
    if st.dropped is not None and st.dropped <= max(exps):
        raise PrecisionExhausted(
            f"cancellation consumed the window up to t^{st.dropped}, not above the top exponent {max(exps)}",
            bound=st.dropped,
        )
    order = sorted(range(st.n), key=lambda i: exps[i])
    p = SeriesMatrix(tuple(tuple(row[i] for i in order) for row in st.p))
    q = SeriesMatrix(tuple(tuple(st.q[i]) for i in order))
    return SmithDecomposition(p, tuple(exps[i] for i in order), q, st.valid_below)


def invariant_factors(
    a: SeriesMatrix, order: Literal["ascending", "descending"] = "ascending"
) -> tuple[Fraction, ...]:
    d = smith_normal_form(a)
    if order == "ascending":
        return d.exponents
    if order == "descending":
        return d.descending
    raise ValueError(f"unknown order {order!r}")


def minor_valuation_oracle(a: SeriesMatrix) -> tuple[Fraction, ...]:
    """Invariant factors from determinantal divisors.

    ``delta_j`` is the least order among all ``j x j`` minors and the factors
    are its successive differences.  Minors are expanded by permutations, so
    this is only practical for ``n <= 5``.
    """
    n = a.n
    rows = a.entries
    deltas: list[Fraction] = []
    for j in range(1, n + 1):
        best: Fraction | None = None
        bounds: list[Fraction] = []
        for ri in combinations(range(n), j):
            for ci in combinations(range(n), j):
                sub = [[rows[r][c] for c in ci] for r in ri]
                try:
                    det = leibniz_determinant(sub)
                except PrecisionExhausted as exc:
                    bounds.append(exc.bound)
                    continue
                if det.is_zero:
                    continue
                o = ord_t(det)
                if best is None or o < best:
                    best = o
        if best is None:
            raise SingularInput(f"every {j}x{j} minor vanishes")
        if bounds and min(bounds) <= best:
            raise PrecisionExhausted(f"a {j}x{j} minor cancelled within the known window", bound=min(bounds))
        deltas.append(best)
    return tuple([deltas[0]] + [deltas[j] - deltas[j - 1] for j in range(1, n)])


@dataclass(frozen=True)
class VerificationReport:
    residual: float
    absolute_residual: float
    ord_det_p: Fraction | None
    ord_det_q: Fraction | None
    ord_det_a: Fraction | None  # compared against the sum of the exponents
    tolerance: float
    passed: bool


def _safe_ord_det(m: SeriesMatrix) -> Fraction | None:
    try:
        det = determinant(m)
    except PrecisionExhausted:
        return None
    return None if det.is_zero else ord_t(det)


def reconstruction_residual(a: SeriesMatrix, d: SmithDecomposition) -> tuple[float, float]:
    """Residual of ``P diag(t^v) Q - A`` over the jointly known window of each entry,
    cut off at ``d.valid_below``.

    Returns ``(absolute, scaled)``: the largest coefficient magnitude of the
    difference, and the largest ratio ``|diff_j| / max(1, scale_j)`` where
    ``scale_j`` sums the magnitudes that fed coefficient ``j``.  Inverting
    unit parts makes tail coefficients grow geometrically, so only the scaled
    figure is meaningful in floating point.  Raw arrays are compared, so exact
    cancellation is not an error here.
    """
    n = a.n
    k = a.ramification
    p, q = d.p, d.q
    worst_abs = worst_rel = 0.0
    for i in range(n):
        for j in range(n):
            terms = []
            for l in range(n):
                if p[i, l].is_zero or q[l, j].is_zero:
                    continue
                terms.append((p[i, l].shifted(d.exponents[l]).lift(k), q[l, j].lift(k)))
            target = a[i, j].lift(k)
            starts = [x.lead_exponent + y.lead_exponent for x, y in terms]
            ends = [x.lead_exponent + y.lead_exponent + min(x.precision, y.precision) for x, y in terms]
            if not target.is_zero:
                starts.append(target.lead_exponent)
                ends.append(target.window_end)
            if not starts:
                continue
            if d.valid_below is not None:
                ends.append(math.ceil(d.valid_below * k))
            lo, hi = min(starts), min(ends)
            if hi <= lo:
                continue
            diff = -target.window(lo, hi)
            scale = np.abs(diff)
            for x, y in terms:
                m = min(x.precision, y.precision)
                xa, ya = x.array()[:m], y.array()[:m]
                off = x.lead_exponent + y.lead_exponent - lo
                if off >= hi - lo:
                    continue
                width = hi - lo - off
                diff[off:] += np.convolve(xa, ya)[:width]
                scale[off:] += np.convolve(np.abs(xa), np.abs(ya))[:width]
            worst_abs = max(worst_abs, float(np.max(np.abs(diff))))
            worst_rel = max(worst_rel, float(np.max(np.abs(diff) / np.maximum(scale, 1.0))))
    return worst_abs, worst_rel


def verify_decomposition(a: SeriesMatrix, d: SmithDecomposition, tol: float = VERIFY_TOL) -> VerificationReport:
    if d.p.n != a.n or d.q.n != a.n or len(d.exponents) != a.n:
        raise ValueError("decomposition dimensions do not match the matrix")
    absolute, residual = reconstruction_residual(a, d)
    op, oq, oa = _safe_ord_det(d.p), _safe_ord_det(d.q), _safe_ord_det(a)
    passed = residual <= tol and op == 0 and oq == 0 and oa == sum(d.exponents)
    return VerificationReport(residual, absolute, op, oq, oa, tol, passed)
