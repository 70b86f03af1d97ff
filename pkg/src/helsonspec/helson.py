"""Finite truncations of the Helson matrices {g_a(nm)} and the discretized
factor maps that tie them to integral Hankel operators with zeta kernels.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ConfigurationError, DomainError
from .gridquad import Grid, SymmetricMatrix

__all__ = [
    "HelsonTruncation",
    "helson_matrix",
    "multiplicative_hilbert_matrix",
    "helson_operator",
    "factor_map",
    "quadratic_form_exp",
    "DENSE_N_MAX",
    "MATVEC_N_MAX",
]

# Dense assembly is cheap up to this order; the matrix-free path covers the
# rest (entries are O(1) to generate, storage is the binding constraint).
DENSE_N_MAX = 2048
MATVEC_N_MAX = 32768

_FACTOR_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class HelsonTruncation:
    """Truncated Helson matrix with entries 1/(sqrt(nm) (a + log nm))."""

    a: float
    n_min: int
    order: int          # largest index N; dimension is N - n_min + 1
    matrix: SymmetricMatrix

    @property
    def dim(self):
        return self.matrix.dim


def _validate_index_base(a, n_min):
    if n_min not in (1, 2):
        raise ConfigurationError(f"index base must be 1 or 2, got {n_min}")
    if a == 0.0 and n_min != 2:
        raise ConfigurationError("a = 0 requires index base 2 (multiplicative Hilbert)")
    if a < 0.0:
        raise DomainError(f"parameter a must be >= 0, got {a}")


def helson_matrix(a, N):
    """Helson truncation M(g_a) on indices 1..N, a > 0."""
    if not a > 0.0:
        raise DomainError(f"helson_matrix requires a > 0, got {a} "
                          "(use multiplicative_hilbert_matrix for a = 0)")
    if N < 1:
        raise ConfigurationError(f"helson_matrix requires N >= 1, got {N}")
    if N > DENSE_N_MAX:
        raise ConfigurationError(
            f"dense truncation capped at N = {DENSE_N_MAX}; use helson_operator")
    entries = _backend.helson_entries(float(a), 1, int(N))
    return HelsonTruncation(float(a), 1, int(N), SymmetricMatrix(entries))


def multiplicative_hilbert_matrix(N):
    """The multiplicative Hilbert matrix truncation: indices 2..N, a = 0."""
    if N < 2:
        raise DomainError(f"multiplicative_hilbert_matrix requires N >= 2, got {N}")
    if N > DENSE_N_MAX + 1:
        raise ConfigurationError(
            f"dense truncation capped at N = {DENSE_N_MAX + 1}; use helson_operator")
    entries = _backend.helson_entries(0.0, 2, int(N) - 1)
    return HelsonTruncation(0.0, 2, int(N), SymmetricMatrix(entries))


def helson_operator(a, N, n_min=1):
    """Matrix-free matvec closure for the order-N truncation, N <= 32768.

    Entries are generated on the fly; use with the Lanczos solver for top
    eigenvalues beyond the dense cap.  Returns (matvec, dim).
    """
    _validate_index_base(a, n_min)
    if not 1 <= N - n_min + 1:
        raise ConfigurationError(f"empty truncation: N={N}, n_min={n_min}")
    if N > MATVEC_N_MAX:
        raise ConfigurationError(f"truncation capped at N = {MATVEC_N_MAX}, got {N}")
    n = np.arange(n_min, N + 1, dtype=np.float64)
    logn = np.log(n)
    rsqrt = 1.0 / np.sqrt(n)
    a = float(a)

    def matvec(x):
        return _backend.helson_matvec(logn, rsqrt, a, np.asarray(x, dtype=np.float64))

    return matvec, n.size


def factor_map(a, n_min, N, grid):
    """Discretized factor map F[n, j] = sqrt(w_j) e^{-a t_j / 2} n^{-1/2 - t_j}.

    F F^T reproduces the Helson truncation up to the quadrature error of the
    integral representation g_a(nm) = int_0^inf e^{-at} (nm)^{-1/2-t} dt,
    whose tail beyond t_max must be negligible (checked here).
    """
    _validate_index_base(a, n_min)
    if N < n_min:
        raise ConfigurationError(f"need N >= n_min, got N={N}, n_min={n_min}")
    if a > 0.0:
        tail = math.exp(-a * grid.t_max) / a
    else:
        # worst tail over n, m >= 2 is at nm = 4
        tail = 4.0 ** (-0.5 - grid.t_max) / math.log(4.0)
    if not tail < _FACTOR_TAIL_TOL:
        raise ConfigurationError(
            f"grid t_max = {grid.t_max} leaves factor-map tail {tail:.2e} "
            f">= {_FACTOR_TAIL_TOL}; widen the grid")
    n = np.arange(n_min, N + 1, dtype=np.float64)
    t = grid.nodes
    F = np.exp(np.outer(-np.log(n), 0.5 + t))
    F *= (grid.sqrt_weights * np.exp(-0.5 * a * t))[None, :]
    return F


def quadratic_form_exp(a, x, grid):
    """The quadratic form (M(g_a) x, x) = int_0^inf e^{-at} |f(t)|^2 dt
    with f(t) = sum_n x_n n^{-1/2 - t}, evaluated by grid quadrature.
    """
    if not a > 0.0:
        raise DomainError(f"quadratic_form_exp requires a > 0, got {a}")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size == 0 or not np.all(np.isfinite(x)):
        raise ConfigurationError("x must be a finite 1-d vector")
    n = np.arange(1, x.size + 1, dtype=np.float64)
    f = x @ np.exp(np.outer(-np.log(n), 0.5 + grid.nodes))
    return float(np.sum(grid.weights * np.exp(-a * grid.nodes) * f * f))
