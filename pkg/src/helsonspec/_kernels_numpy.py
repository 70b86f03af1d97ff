"""Pure-numpy implementations of the hot kernels.

These are the fallback paths used when numba is unavailable or disabled via
``HELSONSPEC_DISABLE_NUMBA``.  They accumulate in the same order as the numba
scalar loops so the two backends agree to the last few ulps.
"""

import numpy as np

from ._constants import (
    BERNOULLI_2J,
    EM_N,
    FACTORIAL_2J,
    LAURENT_COEFFS,
    LAURENT_CUT,
)


def zeta1p_array(u):
    """zeta(1 + u) for an array of u > 0.

    Laurent expansion around the pole for u < 0.5, Euler-Maclaurin otherwise.
    Relative accuracy is a few ulps across the whole range.
    """
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)

    small = u < LAURENT_CUT
    if np.any(small):
        us = u[small]
        acc = 1.0 / us
        p = np.ones_like(us)
        for c in LAURENT_COEFFS:
            acc = acc + c * p
            p = p * us
        out[small] = acc

    if np.any(~small):
        ub = u[~small]
        acc = np.zeros_like(ub)
        for n in range(1, EM_N):
            acc += float(n) ** (-1.0 - ub)
        acc += EM_N ** (-ub) / ub
        acc += 0.5 * EM_N ** (-1.0 - ub)
        z = 1.0 + ub
        poch = z.copy()
        for j in range(1, 12):
            if j > 1:
                poch = poch * (z + (2 * j - 3)) * (z + (2 * j - 2))
            acc += (BERNOULLI_2J[j - 1] / FACTORIAL_2J[j - 1]) * poch \
                * EM_N ** (-z - (2 * j - 1))
        out[~small] = acc
    return out


def zeta_hankel_matrix(t, sw, a, minus_one):
    """Symmetric Nystrom matrix sqrt(w_i w_j) e^{-a(t_i+t_j)/2} (zeta(1+t_i+t_j) - m).

    ``m`` is 1 when ``minus_one`` is set, 0 otherwise.  Exactly symmetric
    because every factor is an elementwise function of the symmetric t_i+t_j.
    """
    u = t[:, None] + t[None, :]
    z = zeta1p_array(u.ravel()).reshape(u.shape)
    if minus_one:
        z = z - 1.0
    if a != 0.0:
        z = z * np.exp(-0.5 * a * u)
    return (sw[:, None] * sw[None, :]) * z


def helson_entries(a, n_min, N):
    """Dense Helson truncation: entry (n, m) = 1 / (sqrt(nm) (a + log(nm)))."""
    n = np.arange(n_min, n_min + N, dtype=np.float64)
    logn = np.log(n)
    rs = 1.0 / np.sqrt(n)
    denom = a + logn[:, None] + logn[None, :]
    return (rs[:, None] * rs[None, :]) / denom


def helson_matvec(logn, rsqrt, a, x):
    """Matrix-free product y = M(g_a) x with entries generated on the fly.

    Blocked over rows to bound temporary memory at ~32 MB regardless of N.
    """
    N = logn.shape[0]
    z = rsqrt * x
    y = np.empty(N)
    block = max(1, (1 << 22) // N)
    for lo in range(0, N, block):
        hi = min(lo + block, N)
        c = a + logn[lo:hi]
        y[lo:hi] = rsqrt[lo:hi] * ((1.0 / (c[:, None] + logn[None, :])) @ z)
    return y
