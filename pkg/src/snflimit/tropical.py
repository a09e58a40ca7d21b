"""Tropicalization, the base-t logarithm map, and the amoeba of a line.

Sign convention: with ``0 < t < 1``, ``log_t |z|`` is large and positive for
small ``|z|``.  Under this convention the ``Log_t`` image of a point tends to
its ``ord`` vector as ``t -> 0+`` with no sign flip, so the tropical line of
``ax + by + c = 0`` has rays along (1, 0), (0, 1) and (-1, -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import OrdOfZero, ZeroCoordinate
from .series import LaurentSeries, ord_t

WINDOW = 5.0


@dataclass(frozen=True)
class TropicalPoint:
    coordinates: tuple[Fraction, ...]

    def __add__(self, other: "TropicalPoint") -> "TropicalPoint":
        return TropicalPoint(tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))


@dataclass(frozen=True)
class RaySet:
    vertex: tuple[float, ...]
    directions: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if any(all(c == 0 for c in d) for d in self.directions):
            raise ValueError("ray directions must be nonzero")


def trop_point(fs: Sequence[LaurentSeries]) -> TropicalPoint:
    coords = []
    for i, f in enumerate(fs):
        if f.is_zero:
            raise OrdOfZero(index=i)
        coords.append(ord_t(f))
    return TropicalPoint(tuple(coords))


def log_map(z: Sequence[complex] | np.ndarray, t: float) -> np.ndarray:
    """``(log_t |z_1|, ..., log_t |z_n|)``."""
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    mod = np.abs(np.asarray(z, dtype=complex))
    if np.any(mod == 0):
        raise ZeroCoordinate(f"coordinate {int(np.flatnonzero(mod == 0)[0])} is zero")
    return np.log(mod) / math.log(t)


def tropical_line() -> RaySet:
    """Tropical variety of ``ax + by + c = 0`` for coefficients of valuation 0.

    The minimum of ``(ord x, ord y, 0)`` must be attained at least twice:
    ``ord y = 0 <= ord x`` gives ray (1, 0), ``ord x = 0 <= ord y`` gives
    (0, 1), and ``ord x = ord y <= 0`` gives (-1, -1).
    """
    one, zero = Fraction(1), Fraction(0)
    return RaySet((0.0, 0.0), ((one, zero), (zero, one), (-one, -one)))


def distance_to_rayset(p: Sequence[float] | np.ndarray, rays: RaySet) -> float:
    """Euclidean distance from ``p`` to the union of the closed rays."""
    p = np.asarray(p, dtype=float) - np.asarray(rays.vertex, dtype=float)
    best = math.inf
    for d in rays.directions:
        d = np.array([float(c) for c in d])
        s = max(0.0, float(p @ d) / float(d @ d))
        best = min(best, float(np.linalg.norm(p - s * d)))
    return best


def distances_to_rayset(points: np.ndarray, rays: RaySet) -> np.ndarray:
    """Vectorized :func:`distance_to_rayset` over the rows of ``points``."""
    p = np.asarray(points, dtype=float) - np.asarray(rays.vertex, dtype=float)
    best = np.full(len(p), np.inf)
    for d in rays.directions:
        d = np.array([float(c) for c in d])
        s = np.maximum(0.0, p @ d / (d @ d))
        best = np.minimum(best, np.linalg.norm(p - s[:, None] * d, axis=1))
    return best


def on_line_amoeba(u: Sequence[float], t: float, a: complex = 1, b: complex = 1, c: complex = 1, rtol: float = 1e-9) -> bool:
    """Whether ``u`` is in the ``Log_t`` image of ``ax + by + c = 0``.

    Phases can be chosen to make the three terms cancel iff their moduli
    satisfy the triangle inequality.
    """
    x, y = t ** u[0], t ** u[1]
    r = sorted([abs(a) * x, abs(b) * y, abs(c)])
    return r[2] <= (r[0] + r[1]) * (1 + rtol)


def amoeba_sample_line(
    a: complex,
    b: complex,
    c: complex,
    t: float,
    count: int,
    seed: int = 0,
    window: float = WINDOW,
) -> np.ndarray:
    """``count`` points of the amoeba of ``ax + by + c = 0``, as rows ``(u1, u2)``.

    Each sample picks a free coordinate (x or y with equal odds), draws its
    modulus log-uniformly in ``[t^window, t^-window]`` and its phase
    uniformly, and solves the line equation for the other coordinate.
    Alternating the free coordinate populates all three tentacles and makes
    the sample symmetric under swapping coordinates when ``a == b``.  Output
    rows are sorted lexicographically.
    """
    if a == 0 or b == 0 or c == 0:
        raise ValueError("line coefficients must all be nonzero")
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    rng = np.random.default_rng(seed)
    out = np.empty((0, 2))
    attempts = 0
    while len(out) < count and attempts < 10 * count:
        m = count - len(out)
        attempts += m
        free_x = rng.random(m) < 0.5
        u = rng.uniform(-window, window, m)
        z = np.power(t, u) * np.exp(2j * np.pi * rng.random(m))
        x = np.where(free_x, z, 0)
        y = np.where(free_x, 0, z)
        x = np.where(free_x, x, -(b * y + c) / a)
        y = np.where(free_x, -(a * x + c) / b, y)
        keep = (x != 0) & (y != 0)
        pts = np.column_stack([np.log(np.abs(x[keep])), np.log(np.abs(y[keep]))]) / math.log(t)
        out = np.vstack([out, pts[np.all(np.isfinite(pts), axis=1)]])
    out = out[:count]
    return out[np.lexsort((out[:, 1], out[:, 0]))]


def ray_probes(rays: RaySet, count: int = 20, window: float = WINDOW) -> np.ndarray:
    """Fixed points on the ray set: the vertex, then points spread round-robin over the rays."""
    v = np.asarray(rays.vertex, dtype=float)
    pts = [v]
    params = np.linspace(0.25, window - 0.25, count - 1)
    for i, s in enumerate(params):
        d = np.array([float(c) for c in rays.directions[i % len(rays.directions)]])
        pts.append(v + s * d / np.abs(d).max())
    return np.array(pts)
