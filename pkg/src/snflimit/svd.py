"""Jacobi-rotation SVD and Hermitian eigensolver for small complex matrices.

The SVD is one-sided (Hestenes): columns are rotated pairwise until mutually
orthogonal and ``A^* A`` is never formed, which keeps singular values of
column-graded matrices accurate to high relative precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian, ZeroVector

SWEEP_TOL = 1e-15
MAX_SWEEPS = 30


@dataclass(frozen=True)
class SvdResult:
    """``A = u @ diag(singular_values) @ w`` with singular values ascending."""

    u: np.ndarray
    singular_values: np.ndarray
    w: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.singular_values) @ self.w

    def unitarity_residuals(self) -> tuple[float, float]:
        n = self.u.shape[1]
        ru = np.linalg.norm(self.u.conj().T @ self.u - np.eye(n))
        rw = np.linalg.norm(self.w @ self.w.conj().T - np.eye(self.w.shape[0]))
        return float(ru), float(rw)


def _rotation(alpha: float, beta: float, gamma: complex) -> tuple[float, float, complex]:
    """Unitary 2x2 ``J`` diagonalizing ``[[alpha, gamma], [conj(gamma), beta]]`` via ``J^* M J``.

    Returned as ``(c, s, phase)`` with
    ``J = [[c, s], [-s * phase, c * phase]]`` and ``phase = conj(gamma)/|gamma|``.
    """
    g = abs(gamma)
    phase = gamma.conjugate() / g
    zeta = (beta - alpha) / (2.0 * g)
    tan = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
    c = 1.0 / np.hypot(1.0, tan)
    return c, c * tan, phase


def _rotate_columns(m: np.ndarray, p: int, q: int, c: float, s: float, phase: complex) -> None:
    mp = m[:, p].copy()
    mq = m[:, q] * phase
    m[:, p] = c * mp - s * mq
    m[:, q] = s * mp + c * mq


def _rotate_rows(m: np.ndarray, p: int, q: int, c: float, s: float, phase: complex) -> None:
    """``m <- J^* m`` on rows ``p``, ``q``."""
    rp, rq = m[p].copy(), m[q].copy()
    m[p] = c * rp - s * np.conj(phase) * rq
    m[q] = s * rp + c * np.conj(phase) * rq


def _complete_orthonormal(u: np.ndarray, missing: list[int]) -> None:
    """Fill columns ``missing`` of ``u`` with an orthonormal complement of the others."""
    m = u.shape[0]
    basis = [u[:, j] for j in range(u.shape[1]) if j not in missing]
    fill = iter(missing)
    for e in np.eye(m, dtype=complex):
        if len(basis) == u.shape[1]:
            break
        v = e.copy()
        for _ in range(2):
            for b in basis:
                v -= np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            v /= nv
            basis.append(v)
            u[:, next(fill)] = v


def svd(a: np.ndarray, tol: float = SWEEP_TOL, max_sweeps: int = MAX_SWEEPS) -> SvdResult:
    """One-sided Jacobi SVD of an ``m x n`` matrix with ``m >= n``.

    Column pairs are swept in cyclic-by-rows order; a pair is rotated when
    ``|g_p^* g_q| > tol * ||g_p|| ||g_q||``.  Converged once a sweep performs
    no rotation.
    """
    g = np.array(a, dtype=complex)
    if g.ndim != 2 or g.shape[0] < g.shape[1]:
        raise ValueError(f"need an m x n matrix with m >= n, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("matrix has non-finite entries")
    n = g.shape[1]
    v = np.eye(n, dtype=complex)

    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = np.vdot(g[:, p], g[:, p]).real
                beta = np.vdot(g[:, q], g[:, q]).real
                gamma = np.vdot(g[:, p], g[:, q])
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0:
                    continue
                c, s, phase = _rotation(alpha, beta, gamma)
                _rotate_columns(g, p, q, c, s, phase)
                _rotate_columns(v, p, q, c, s, phase)
                rotated = True
        if not rotated:
            break
    else:
        raise NoConvergence(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")

    sigma = np.linalg.norm(g, axis=0)
    order = np.argsort(sigma, kind="stable")
    sigma = sigma[order]
    g, v = g[:, order], v[:, order]
    u = np.zeros_like(g)
    missing = []
    for j in range(n):
        if sigma[j] > 0:
            u[:, j] = g[:, j] / sigma[j]
        else:
            missing.append(j)
    if missing:
        _complete_orthonormal(u, missing)
    return SvdResult(u, sigma, v.conj().T)


def singular_values(a: np.ndarray) -> np.ndarray:
    return svd(a).singular_values


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.array(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHermitian(f"need a square matrix, got shape {h.shape}")
    if np.linalg.norm(h - h.conj().T) > 1e-12 * np.linalg.norm(h):
        raise NotHermitian("matrix is not Hermitian to 1e-12 relative")
    return h


def hermitian_eigenvalues(h: np.ndarray, tol: float = SWEEP_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues, ascending, by cyclic two-sided Jacobi."""
    h = _check_hermitian(h)
    h = (h + h.conj().T) / 2
    n = h.shape[0]
    scale = np.linalg.norm(h)
    if scale == 0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = np.linalg.norm(h - np.diag(np.diag(h)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                gamma = h[p, q]
                if gamma == 0:
                    continue
                c, s, phase = _rotation(h[p, p].real, h[q, q].real, gamma)
                _rotate_columns(h, p, q, c, s, phase)
                _rotate_rows(h, p, q, c, s, phase)
                h[q, p] = h[p, q] = 0.0
    else:
        off = np.linalg.norm(h - np.diag(np.diag(h)))
        if off > tol * scale:
            raise NoConvergence(f"two-sided Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(h).real)


def rayleigh(h: np.ndarray, x: np.ndarray) -> float:
    """``(Hx, x) / (x, x)`` with ``(x, y) = sum x_i conj(y_i)``."""
    x = np.asarray(x, dtype=complex)
    xx = np.vdot(x, x).real
    if xx == 0:
        raise ZeroVector("Rayleigh quotient of the zero vector")
    return float(np.vdot(x, np.asarray(h) @ x).real / xx)
