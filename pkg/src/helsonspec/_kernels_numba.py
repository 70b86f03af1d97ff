"""Numba-compiled hot kernels: zeta arrays, Nystrom assembly, Helson products.

Import fails with ImportError when numba is not installed; the backend module
then falls back to the pure-numpy twins in ``_kernels_numpy``.
"""

import os

# Prefer OpenMP for the parallel loops; the default TBB probe is noisy on
# hosts with an older TBB and falls back anyway.
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

import numpy as np
from numba import njit, prange

from ._constants import (
    BERNOULLI_2J,
    EM_N,
    FACTORIAL_2J,
    LAURENT_COEFFS,
    LAURENT_CUT,
)

_LAURENT = np.ascontiguousarray(LAURENT_COEFFS)
_B2J = np.ascontiguousarray(BERNOULLI_2J)
_F2J = np.ascontiguousarray(FACTORIAL_2J)


@njit(cache=True)
def _zeta1p_scalar(u):
    if u < LAURENT_CUT:
        acc = 1.0 / u
        p = 1.0
        for i in range(_LAURENT.shape[0]):
            acc += _LAURENT[i] * p
            p *= u
        return acc
    acc = 0.0
    for n in range(1, EM_N):
        acc += float(n) ** (-1.0 - u)
    acc += EM_N ** (-u) / u
    acc += 0.5 * EM_N ** (-1.0 - u)
    z = 1.0 + u
    poch = z
    for j in range(1, 12):
        if j > 1:
            poch *= (z + (2 * j - 3)) * (z + (2 * j - 2))
        acc += (_B2J[j - 1] / _F2J[j - 1]) * poch * float(EM_N) ** (-z - (2 * j - 1))
    return acc


@njit(cache=True, parallel=True)
def zeta1p_array(u):
    out = np.empty_like(u)
    for i in prange(u.shape[0]):
        out[i] = _zeta1p_scalar(u[i])
    return out


@njit(cache=True, parallel=True)
def zeta_hankel_matrix(t, sw, a, minus_one):
    n = t.shape[0]
    A = np.empty((n, n))
    for i in prange(n):
        for j in range(i, n):
            u = t[i] + t[j]
            v = _zeta1p_scalar(u)
            if minus_one:
                v -= 1.0
            if a != 0.0:
                v *= np.exp(-0.5 * a * u)
            val = sw[i] * sw[j] * v
            A[i, j] = val
            A[j, i] = val
    return A


@njit(cache=True, parallel=True)
def helson_entries(a, n_min, N):
    logn = np.empty(N)
    rs = np.empty(N)
    for i in range(N):
        logn[i] = np.log(float(n_min + i))
        rs[i] = 1.0 / np.sqrt(float(n_min + i))
    M = np.empty((N, N))
    for i in prange(N):
        for j in range(i, N):
            val = rs[i] * rs[j] / (a + logn[i] + logn[j])
            M[i, j] = val
            M[j, i] = val
    return M


@njit(cache=True, parallel=True)
def helson_matvec(logn, rsqrt, a, x):
    N = logn.shape[0]
    y = np.empty(N)
    z = rsqrt * x
    for i in prange(N):
        c = a + logn[i]
        acc = 0.0
        for j in range(N):
            acc += z[j] / (c + logn[j])
        y[i] = rsqrt[i] * acc
    return y
