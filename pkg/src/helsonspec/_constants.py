"""Numeric constants shared by the numpy and numba kernel implementations."""

import numpy as np

EULER_GAMMA = 0.5772156649015328606065

# Stieltjes constants gamma_0 .. gamma_25 (20+ significant digits).
# They drive the Laurent expansion zeta(1+u) = 1/u + sum (-1)^n gamma_n u^n / n!,
# which is the only stable way to evaluate zeta(1+u) for small u: forming the
# argument 1+u first would lose up to 10 digits of u to rounding.
STIELTJES = np.array([
    0.5772156649015328606065,
    -0.07281584548367672486059,
    -0.00969036319287231848453,
    0.00205383442030334586616,
    0.002325370065467300057468,
    0.0007933238173010627017533,
    -0.0002387693454301996098724,
    -0.0005272895670577510460741,
    -0.0003521233538030395096021,
    -0.00003439477441808804817791,
    0.0002053328149090647946837,
    0.0002701844395439035266729,
    0.0001672729121051401933535,
    -0.00002746380660376015886001,
    -0.0002092092620592999458371,
    -0.0002834686553202414466429,
    -0.0001996968583089697747078,
    0.00002627703710991833669947,
    0.0003073684081492528265928,
    0.0005036054530473556290556,
    0.0004663435615115594494006,
    0.0001044377697560001158108,
    -0.0005415995822039977016552,
    -0.0012439620904082457793,
    -0.001588511278903561561906,
    -0.001074591952738488824724,
])

_FACTORIALS = np.cumprod(np.concatenate(([1.0], np.arange(1.0, 26.0))))

# Coefficients of the Laurent tail: (-1)^n gamma_n / n!
LAURENT_COEFFS = STIELTJES * (-1.0) ** np.arange(26) / _FACTORIALS

# Bernoulli numbers B_2, B_4, ..., B_22 for the Euler-Maclaurin tail.
BERNOULLI_2J = np.array([
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
])

FACTORIAL_2J = np.array([
    2.0, 24.0, 720.0, 40320.0, 3628800.0, 479001600.0,
    87178291200.0, 20922789888000.0, 6402373705728000.0,
    2432902008176640000.0, 1124000727777607680000.0,
])

# Euler-Maclaurin cut: direct terms n = 1 .. EM_N-1 plus tail corrections.
EM_N = 20

# Below this u the Laurent branch evaluates zeta(1+u); above, Euler-Maclaurin.
LAURENT_CUT = 0.5
