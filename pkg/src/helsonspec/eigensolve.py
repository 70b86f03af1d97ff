"""Symmetric eigensolvers: dense LAPACK decomposition, matrix-free Lanczos
with full reorthogonalization for extreme eigenpairs, and threshold counting.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, IterationError
from .gridquad import SymmetricMatrix

__all__ = ["EigenResult", "eigen_full", "top_eigenpairs", "count_above"]

DENSE_DIM_MAX = 4096

_LANCZOS_SEED = 0x5EED
_MAX_RESTARTS = 5


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues, optional orthonormal eigenvectors (columns),
    and the largest relative residual ||Av - lv|| / scale over computed pairs."""

    values: np.ndarray
    vectors: Optional[np.ndarray] = None
    residual_max: float = 0.0


def _as_array(A):
    if isinstance(A, SymmetricMatrix):
        return A.array
    a = np.asarray(A, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigurationError("expected a square symmetric matrix")
    return a


def eigen_full(A, want_vectors=False):
    """Full symmetric eigendecomposition (LAPACK), eigenvalues ascending."""
    a = _as_array(A)
    if a.shape[0] > DENSE_DIM_MAX:
        raise ConfigurationError(
            f"dense eigensolve capped at dim {DENSE_DIM_MAX}, got {a.shape[0]}")
    if want_vectors:
        values, vectors = np.linalg.eigh(a)
        scale = max(np.abs(values).max(), np.finfo(float).tiny)
        resid = np.linalg.norm(a @ vectors - vectors * values[None, :], axis=0)
        return EigenResult(values, vectors, float(resid.max() / scale))
    return EigenResult(np.linalg.eigvalsh(a))


def top_eigenpairs(matvec, dim, count=1, tol=1e-10, max_steps=None,
                   seed=_LANCZOS_SEED):
    """Largest `count` eigenpairs of a symmetric operator given as a matvec.

    Lanczos iteration with full reorthogonalization (robustness over speed at
    these problem sizes), restarted from the best Ritz vector on stagnation.
    Raises IterationError carrying the best estimates if the residual target
    is not met.
    """
    if callable(matvec):
        op = matvec
    else:
        a = _as_array(matvec)
        op = lambda x: a @ x
    if not 1 <= count <= 10:
        raise ConfigurationError(f"count must lie in 1..10, got {count}")
    if dim < 1:
        raise ConfigurationError(f"dim must be positive, got {dim}")
    count = min(count, dim)
    if dim == 1:
        lam = float(op(np.ones(1))[0])
        return EigenResult(np.array([lam]), np.ones((1, 1)), 0.0)

    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dim)
    q /= np.linalg.norm(q)
    m_cap = min(dim, max(40, 12 * count)) if max_steps is None else min(dim, max_steps)

    best = None
    for _ in range(_MAX_RESTARTS):
        Q = np.empty((dim, m_cap))
        alphas = np.empty(m_cap)
        betas = np.zeros(m_cap)
        Q[:, 0] = q
        m = 0
        for j in range(m_cap):
            w = op(Q[:, j])
            alpha = float(Q[:, j] @ w)
            alphas[j] = alpha
            w = w - alpha * Q[:, j]
            if j > 0 and betas[j - 1] != 0.0:
                w = w - betas[j - 1] * Q[:, j - 1]
            # full reorthogonalization, twice for good measure
            w = w - Q[:, :j + 1] @ (Q[:, :j + 1].T @ w)
            w = w - Q[:, :j + 1] @ (Q[:, :j + 1].T @ w)
            beta = float(np.linalg.norm(w))
            m = j + 1
            if j + 1 >= m_cap:
                break
            scale = max(np.abs(alphas[:m]).max(), 1.0)
            if beta <= 1e-14 * scale:
                # invariant subspace hit: continue in its orthogonal complement
                w = rng.standard_normal(dim)
                w = w - Q[:, :m] @ (Q[:, :m].T @ w)
                nw = float(np.linalg.norm(w))
                if nw < 1e-8 or m >= dim:
                    break
                betas[j] = 0.0
                Q[:, j + 1] = w / nw
            else:
                betas[j] = beta
                Q[:, j + 1] = w / beta

        T = np.diag(alphas[:m]) + np.diag(betas[:m - 1], 1) + np.diag(betas[:m - 1], -1)
        tvals, tvecs = np.linalg.eigh(T)
        k = min(count, m)
        ritz_values = tvals[-k:]
        ritz_vectors = Q[:, :m] @ tvecs[:, -k:]
        scale = max(np.abs(tvals).max(), 1e-300)
        residuals = np.empty(k)
        for i in range(k):
            v = ritz_vectors[:, i]
            v /= np.linalg.norm(v)
            ritz_vectors[:, i] = v
            residuals[i] = np.linalg.norm(op(v) - ritz_values[i] * v) / scale
        result = EigenResult(ritz_values, ritz_vectors, float(residuals.max()))
        if best is None or result.residual_max < best.residual_max:
            best = result
        if k == count and result.residual_max <= tol:
            return result
        # restart from the best Ritz vector, reseeding its orthogonal complement
        q = ritz_vectors[:, -1] + 1e-8 * rng.standard_normal(dim)
        q /= np.linalg.norm(q)
        m_cap = min(dim, 2 * m_cap)

    raise IterationError(
        f"Lanczos did not reach tol={tol} after {_MAX_RESTARTS} restarts "
        f"(best residual {best.residual_max:.3e})", result=best)


def count_above(values, threshold):
    """Number of entries strictly greater than the threshold (sorted input)."""
    v = np.asarray(values, dtype=np.float64)
    return int(v.size - np.searchsorted(v, threshold, side="right"))
