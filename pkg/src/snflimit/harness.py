"""Numerical experiments around log_t singular values and invariant factors.

Throughout, ``log_t(x) = ln(x) / ln(t)`` with ``0 < t < 1``.  Ascending
singular values ``d_1 <= ... <= d_n`` are paired index-wise with descending
invariant factors ``v_1 >= ... >= v_n``; logs are never re-sorted.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotUnit, ZeroSingularValue
from .series import SeriesMatrix, determinant, evaluate_matrix, ord_t
from .smith import SmithDecomposition, smith_normal_form
from .svd import hermitian_eigenvalues, svd

DEFAULT_SCHEDULE = (1e-2, 1e-4, 1e-6, 1e-8)
DEFAULT_SEED = 20180601
SPHERE_SAMPLES = 200
MINMAX_TOL = 1e-10
SANDWICH_TOL = 1e-9


def log_t(x: float | np.ndarray, t: float) -> float | np.ndarray:
    return np.log(x) / math.log(t)


def _check_t(t: float) -> None:
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")


@dataclass(frozen=True)
class ConvergenceRow:
    t: float
    log_singular_values: tuple[float, ...]
    invariant_factors: tuple[Fraction, ...]
    errors: tuple[float, ...]
    max_error: float


@dataclass(frozen=True)
class LemmaBoundEstimate:
    """Sampled extremes of ``||P(t) x||`` over unit vectors ``x`` (estimates, not proofs)."""

    m_est: float
    M_est: float


def log_singular_values(a: SeriesMatrix, t: float) -> np.ndarray:
    _check_t(t)
    d = svd(evaluate_matrix(a, t)).singular_values
    zero = np.flatnonzero(d == 0)
    if zero.size:
        raise ZeroSingularValue(int(zero[0]))
    return log_t(d, t)


def _row(a: SeriesMatrix, t: float, v: tuple[Fraction, ...]) -> ConvergenceRow:
    logs = log_singular_values(a, t)
    errs = np.abs(logs - np.array([float(x) for x in v]))
    return ConvergenceRow(
        t=float(t),
        log_singular_values=tuple(float(x) for x in logs),
        invariant_factors=v,
        errors=tuple(float(e) for e in errs),
        max_error=float(errs.max()),
    )


def convergence_table(
    a: SeriesMatrix,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    workers: int = 1,
    decomposition: SmithDecomposition | None = None,
) -> list[ConvergenceRow]:
    schedule = [float(t) for t in schedule]
    for t in schedule:
        _check_t(t)
    if any(b >= a_ for a_, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    d = decomposition or smith_normal_form(a)
    v = d.descending
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda t: _row(a, t, v), schedule))
    return [_row(a, t, v) for t in schedule]


# -- min-max principle --------------------------------------------------------


def _orthonormal_frame(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    z = rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim))
    q, _ = np.linalg.qr(z)
    return q


def compressed_extremes(h: np.ndarray, frame: np.ndarray) -> tuple[float, float]:
    """Min and max Rayleigh quotient of ``h`` over the span of an orthonormal frame."""
    c = frame.conj().T @ h @ frame
    # Hermitian by construction; a near-zero compression can still carry rounding asymmetry
    ev = hermitian_eigenvalues((c + c.conj().T) / 2)
    return float(ev[0]), float(ev[-1])


@dataclass(frozen=True)
class MinMaxReport:
    k: int
    eigenvalue: float
    trials: int
    max_violations: int
    min_violations: int
    tightest_max: float  # smallest inner max over sampled k-dim subspaces
    tightest_min: float  # largest inner min over sampled (n-k+1)-dim subspaces

    @property
    def passed(self) -> bool:
        return self.max_violations == 0 and self.min_violations == 0


def minmax_spot_check(
    h: np.ndarray, k: int, trials: int = 1000, seed: int = DEFAULT_SEED, tol: float = MINMAX_TOL
) -> MinMaxReport:
    """Sample subspaces and test both sides of the Courant-Fischer characterization of ``lambda_k``."""
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}")
    lam = float(hermitian_eigenvalues(h)[k - 1])
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.linalg.norm(h)))
    bad_max = bad_min = 0
    tight_max, tight_min = math.inf, -math.inf
    for _ in range(trials):
        _, top = compressed_extremes(h, _orthonormal_frame(rng, n, k))
        bottom, _ = compressed_extremes(h, _orthonormal_frame(rng, n, n - k + 1))
        bad_max += top < lam - tol * scale
        bad_min += bottom > lam + tol * scale
        tight_max = min(tight_max, top)
        tight_min = max(tight_min, bottom)
    return MinMaxReport(k, lam, trials, bad_max, bad_min, tight_max, tight_min)


# -- proof ingredients --------------------------------------------------------


def _unit_sphere(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    z = rng.normal(size=(n, count)) + 1j * rng.normal(size=(n, count))
    return z / np.linalg.norm(z, axis=0)


def lemma_bound_estimate(
    p: SeriesMatrix,
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    sphere_samples: int = SPHERE_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> LemmaBoundEstimate:
    """Extremes of ``||P(t) x||`` over random unit ``x`` and all ``t`` in the schedule.

    At each ``t`` the probe set is topped up with the two extremal right
    singular vectors of ``P(t)``, so the sampled range always contains the
    true extremes at that ``t``.
    """
    det = determinant(p)
    if det.is_zero or ord_t(det) != 0:
        raise NotUnit("matrix is not invertible over the power-series ring (ord det != 0)")
    rng = np.random.default_rng(seed)
    lo, hi = math.inf, 0.0
    for t in schedule:
        _check_t(t)
        pt = evaluate_matrix(p, t)
        x = _unit_sphere(rng, p.n, sphere_samples)
        w = svd(pt).w
        x = np.hstack([x, w[[0, -1], :].conj().T])
        norms = np.linalg.norm(pt @ x, axis=0)
        lo, hi = min(lo, float(norms.min())), max(hi, float(norms.max()))
    return LemmaBoundEstimate(lo, hi)


@dataclass(frozen=True)
class SandwichReport:
    t: float
    k: int
    v_k: Fraction
    log_d_k: float
    lower: float
    upper: float
    sandwich_ok: bool
    product_max_ok: bool  # d_k^2 <= product of the three maxima over W = Q^-1(E_k)
    product_min_ok: bool  # d_k^2 >= product of the three minima over U = Q^-1(E'_k)
    tau_extremes_ok: bool  # max / min of |tau y|^2/|y|^2 on E_k / E'_k equal t^(2 v_k)
    gram_identity_error: float  # max relative gap between (A*Ax, x) and (Ax, Ax)

    @property
    def passed(self) -> bool:
        return (
            self.sandwich_ok
            and self.product_max_ok
            and self.product_min_ok
            and self.tau_extremes_ok
            and self.gram_identity_error <= 1e-12
        )


def _extremes(m: np.ndarray) -> tuple[float, float]:
    """Min and max of ``|M c|^2 / |c|^2`` for a tall ``M``."""
    sv = svd(m).singular_values
    return float(sv[0] ** 2), float(sv[-1] ** 2)


def sandwich_check(
    a: SeriesMatrix,
    t: float,
    k: int,
    decomposition: SmithDecomposition | None = None,
    samples: int = 100,
    sphere_samples: int = SPHERE_SAMPLES,
    seed: int = DEFAULT_SEED,
    tol: float = SANDWICH_TOL,
) -> SandwichReport:
    """Check the two-sided bound on ``log_t d_k(t)`` and the product inequalities behind it.

    The decomposition is reordered so exponents descend (``d_1`` pairs with the
    largest exponent); ``E_k`` is then the span of the first ``k`` basis vectors.
    """
    _check_t(t)
    n = a.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}")
    d = decomposition or smith_normal_form(a)
    rev = list(range(n))[::-1]
    v = [d.exponents[i] for i in rev]
    pt = evaluate_matrix(d.p, t)[:, rev]
    qt = evaluate_matrix(d.q, t)[rev, :]
    tau = np.diag([t ** float(x) for x in v])
    at = evaluate_matrix(a, t)

    mp = lemma_bound_estimate(d.p, [t], sphere_samples, seed)
    mq = lemma_bound_estimate(d.q, [t], sphere_samples, seed + 1)
    sv = svd(at).singular_values
    dk = sv[k - 1]
    lg = float(log_t(dk, t))
    vk = v[k - 1]
    lower = float(vk) + float(log_t(mp.M_est * mq.M_est, t))
    upper = float(vk) + float(log_t(mp.m_est * mq.m_est, t))
    sandwich_ok = lower - tol <= lg <= upper + tol

    # W = Q^-1(E_k), U = Q^-1(E'_k).  With B = F R (F orthonormal) a basis of
    # the subspace, Q F = E R^-1 and A F = P tau E R^-1 exactly, so every
    # restricted operator is formed without the cancellation that A(t) @ F
    # suffers when tau is graded.
    q_inv = np.linalg.inv(qt)
    head, tail = slice(0, k), slice(k - 1, n)
    _, r_w = np.linalg.qr(q_inv[:, head])
    _, r_u = np.linalg.qr(q_inv[:, tail])
    rw_inv, ru_inv = np.linalg.inv(r_w), np.linalg.inv(r_u)
    target = t ** (2 * float(vk))

    _, a_max = _extremes(pt[:, head] @ tau[head, head] @ rw_inv)
    a_min, _ = _extremes(pt[:, tail] @ tau[tail, tail] @ ru_inv)
    _, tau_max = _extremes(tau[:, head])
    tau_min, _ = _extremes(tau[:, tail])
    _, qw_max = _extremes(rw_inv)
    qu_min, _ = _extremes(ru_inv)
    _, pw_max = _extremes(pt[:, head])
    pu_min, _ = _extremes(pt[:, tail])
    # rounding A(t) entrywise moves d_k by about eps * d_max (Weyl)
    rel = 1e-9 + 8 * n * np.finfo(float).eps * sv[-1] / dk
    product_max_ok = dk**2 <= a_max * (1 + rel) and a_max <= pw_max * tau_max * qw_max * (1 + rel)
    product_min_ok = dk**2 >= a_min * (1 - rel) and a_min >= pu_min * tau_min * qu_min * (1 - rel)
    tau_ok = math.isclose(tau_max, target, rel_tol=1e-12) and math.isclose(tau_min, target, rel_tol=1e-12)

    rng = np.random.default_rng(seed + 2)
    xs = rng.normal(size=(n, samples)) + 1j * rng.normal(size=(n, samples))
    gram = at.conj().T @ at
    lhs = np.einsum("ij,ij->j", (gram @ xs), xs.conj())
    ax = at @ xs
    rhs = np.einsum("ij,ij->j", ax, ax.conj())
    gram_err = float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))

    return SandwichReport(
        t=float(t),
        k=k,
        v_k=vk,
        log_d_k=lg,
        lower=lower,
        upper=upper,
        sandwich_ok=sandwich_ok,
        product_max_ok=product_max_ok,
        product_min_ok=product_min_ok,
        tau_extremes_ok=tau_ok,
        gram_identity_error=gram_err,
    )


def determinant_gap(a: SeriesMatrix, t: float) -> float:
    """``|sum_k log_t d_k(t) - log_t |det A(t)||``."""
    logs = log_singular_values(a, t)
    _, logdet = np.linalg.slogdet(evaluate_matrix(a, t))
    return abs(float(np.sum(logs)) - logdet / math.log(t))
