"""CSV, JSON and SVG emitters.

Floats are written with ``repr`` so output is locale independent and
round-trips exactly; newlines are always ``\\n``.
"""

from __future__ import annotations

import io
import json
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .harness import ConvergenceRow
from .smith import SmithDecomposition, VerificationReport
from .tropical import RaySet, TropicalPoint


def fmt_float(x: float) -> str:
    return repr(float(x))


def fmt_exponent(x: Fraction) -> str:
    return str(Fraction(x))


def _csv(rows: Iterable[Sequence[str]]) -> str:
    return "".join(",".join(r) + "\n" for r in rows)


def _json_exponent(x: Fraction) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def convergence_csv(rows: Sequence[ConvergenceRow]) -> str:
    n = len(rows[0].log_singular_values) if rows else 0
    header = ["t", *(f"log_d_{i}" for i in range(1, n + 1)), *(f"v_{i}" for i in range(1, n + 1)), "max_error"]
    body = [
        [
            fmt_float(r.t),
            *(fmt_float(x) for x in r.log_singular_values),
            *(fmt_exponent(v) for v in r.invariant_factors),
            fmt_float(r.max_error),
        ]
        for r in rows
    ]
    return _csv([header, *body])


def convergence_json(rows: Sequence[ConvergenceRow]) -> str:
    return json.dumps(
        [
            {
                "t": r.t,
                "log_singular_values": list(r.log_singular_values),
                "invariant_factors": [_json_exponent(v) for v in r.invariant_factors],
                "errors": list(r.errors),
                "max_error": r.max_error,
            }
            for r in rows
        ],
        indent=2,
    ) + "\n"


def smith_summary(d: SmithDecomposition, report: VerificationReport) -> dict[str, Any]:
    return {
        "exponents_ascending": [_json_exponent(v) for v in d.exponents],
        "exponents_descending": [_json_exponent(v) for v in d.descending],
        "verification": {
            "residual": report.residual,
            "absolute_residual": report.absolute_residual,
            "ord_det_p": None if report.ord_det_p is None else _json_exponent(report.ord_det_p),
            "ord_det_q": None if report.ord_det_q is None else _json_exponent(report.ord_det_q),
            "ord_det_a": None if report.ord_det_a is None else _json_exponent(report.ord_det_a),
            "valid_below": None if d.valid_below is None else _json_exponent(d.valid_below),
            "tolerance": report.tolerance,
            "passed": report.passed,
        },
    }


def smith_text(d: SmithDecomposition, report: VerificationReport) -> str:
    out = io.StringIO()
    out.write("exponents (ascending): " + " ".join(fmt_exponent(v) for v in d.exponents) + "\n")
    out.write("exponents (descending): " + " ".join(fmt_exponent(v) for v in d.descending) + "\n")
    out.write(f"residual: {fmt_float(report.residual)}\n")
    out.write(f"absolute residual: {fmt_float(report.absolute_residual)}\n")
    out.write(f"ord det P: {report.ord_det_p}\n")
    out.write(f"ord det Q: {report.ord_det_q}\n")
    out.write(f"ord det A: {report.ord_det_a} (sum of exponents {sum(d.exponents)})\n")
    out.write(f"verification: {'pass' if report.passed else 'FAIL'}\n")
    return out.getvalue()


def smith_csv(d: SmithDecomposition, report: VerificationReport) -> str:
    n = len(d.exponents)
    header = [*(f"v_asc_{i}" for i in range(1, n + 1)), "residual", "ord_det_p", "ord_det_q", "ord_det_a", "passed"]
    row = [
        *(fmt_exponent(v) for v in d.exponents),
        fmt_float(report.residual),
        str(report.ord_det_p),
        str(report.ord_det_q),
        str(report.ord_det_a),
        "1" if report.passed else "0",
    ]
    return _csv([header, row])


def trop_text(p: TropicalPoint) -> str:
    return " ".join(fmt_exponent(c) for c in p.coordinates) + "\n"


def points_csv(points: np.ndarray) -> str:
    return _csv([["u1", "u2"], *([fmt_float(x), fmt_float(y)] for x, y in points)])


def amoeba_svg(points: np.ndarray, rays: RaySet, window: float = 5.0, size: int = 480) -> str:
    """Static scatter of ``points`` in ``[-window, window]^2`` with the rays drawn on top."""
    scale = size / (2 * window)

    def px(u: float, v: float) -> tuple[float, float]:
        return (u + window) * scale, (window - v) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    ox, oy = px(0, 0)
    parts.append(f'<line x1="0" y1="{oy:.2f}" x2="{size}" y2="{oy:.2f}" stroke="#ddd"/>')
    parts.append(f'<line x1="{ox:.2f}" y1="0" x2="{ox:.2f}" y2="{size}" stroke="#ddd"/>')
    for u, v in points:
        if abs(u) <= window and abs(v) <= window:
            x, y = px(u, v)
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.2" fill="#1f77b4" fill-opacity="0.5"/>')
    vx, vy = rays.vertex
    for d in rays.directions:
        d = np.array([float(c) for c in d])
        end = np.array([vx, vy]) + 2 * window * d / np.abs(d).max()
        x1, y1 = px(vx, vy)
        x2, y2 = px(*end)
        parts.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="#d62728" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
