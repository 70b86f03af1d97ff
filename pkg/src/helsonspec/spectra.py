"""The experiment layer: eigenvalue curves, the critical-parameter bracket,
spectrum-fill reports, factorization equivalence, eigenfunction residuals,
quadratic-form monotonicity and the multiplicity diagnostic.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .eigensolve import count_above, eigen_full, top_eigenpairs
from .errors import ConfigurationError, DiagnosticError, DomainError
from .gridquad import (
    Grid,
    build_grid,
    discretize_hankel,
    project_function,
    quad_integral,
    reference_grid,
)
from .helson import (
    HelsonTruncation,
    factor_map,
    helson_matrix,
    helson_operator,
    multiplicative_hilbert_matrix,
    quadratic_form_exp,
)
from .specialfn import KernelFamily, KernelSpec, kernel_eval, lambda_of_k, psi_k

__all__ = [
    "ExperimentConfig",
    "CurvePoint",
    "AStarEstimate",
    "SpectrumReport",
    "EquivalenceReport",
    "MonotonicityReport",
    "MultiplicityReport",
    "lambda_curve",
    "estimate_a_star",
    "spectrum_report",
    "equivalence_check",
    "eigenfunction_residual",
    "hs_gap",
    "monotonicity_check",
    "multiplicity_diagnostic",
]

PI = math.pi

# Thresholds shared by the counting experiments.
ABOVE_PI_TOL = 1e-8
BELOW_ZERO_TOL = -1e-10

# Fixed seed for the reproducible random-vector experiments.
LCG_SEED = 0x5EED


@dataclass(frozen=True)
class ExperimentConfig:
    """Discretization settings for the experiments.

    ``level`` steps widen the grid by ``widen_step`` decades on each side and
    add one panel per decade; truncation sizes list the Helson orders used by
    the truncation route.
    """

    t_min: float = 1e-12
    t_max: float = 1e12
    panels_per_decade: int = 4
    nodes_per_panel: int = 16
    truncation_sizes: tuple = (128, 512)
    widen_step: float = 2.0

    def grid(self, level=0):
        f = 10.0 ** (self.widen_step * level)
        return build_grid(self.t_min / f, self.t_max * f,
                          self.panels_per_decade + level, self.nodes_per_panel)

    def describe(self, level=0):
        f = 10.0 ** (self.widen_step * level)
        return {
            "t_min": self.t_min / f,
            "t_max": self.t_max * f,
            "panels_per_decade": self.panels_per_decade + level,
            "nodes_per_panel": self.nodes_per_panel,
        }


def _nystrom_top(a, grid, count=1):
    """Top eigenvalues of the discretized H(h_a) on the grid."""
    mat = discretize_hankel(KernelSpec(KernelFamily.HA, a), grid)
    res = top_eigenpairs(mat.matvec, mat.dim, count=count, tol=1e-11)
    return res.values


def _truncation_top(a, N):
    matvec, dim = helson_operator(a, N)
    res = top_eigenpairs(matvec, dim, count=1, tol=1e-11)
    return float(res.values[-1])


@dataclass(frozen=True)
class CurvePoint:
    """Dual estimates of the top eigenvalue at one parameter value."""

    a: float
    lambda_nystrom: float
    lambda_trunc: tuple          # ((N, top eigenvalue), ...) ascending N
    lower_bound: float           # 1/a
    upper_bound: float           # pi + 1/a
    above_pi: bool
    bounds_ok: bool


def lambda_curve(a_values, config=None):
    """Per-parameter top-eigenvalue estimates along both routes.

    The Nystrom estimate is the headline (faster convergence); truncation
    estimates are reported alongside as lower witnesses.
    """
    config = config or ExperimentConfig()
    a_values = [float(a) for a in a_values]
    if any(a <= 0.0 for a in a_values):
        raise DomainError("lambda_curve requires all a > 0")
    grid = config.grid()
    points = []
    for a in a_values:
        lam_n = float(_nystrom_top(a, grid)[-1])
        truncs = tuple((N, _truncation_top(a, N)) for N in config.truncation_sizes)
        lower, upper = 1.0 / a, PI + 1.0 / a
        lam_all = [lam_n] + [v for _, v in truncs]
        ok = all(lower - 1e-10 <= v <= upper + 1e-2 for v in lam_all)
        points.append(CurvePoint(a, lam_n, truncs, lower, upper,
                                 lam_n > PI + 1e-6, ok))
    return points


@dataclass(frozen=True)
class AStarEstimate:
    """Bisection bracket for the critical parameter at a given resolution."""

    a_lo: float
    a_hi: float
    indicator_margin: float
    discretization: dict
    coarse_bracket: tuple
    evaluations: tuple


def _indicator(a, grid_lo, grid_hi):
    """Detect an eigenvalue above pi with a two-level discretization proxy.

    Returns (flag, margin, lam_lo, lam_hi): the margin is the larger of 1e-6
    and the two-level difference, guarding against calling discretization
    error an eigenvalue.
    """
    lam_lo = float(_nystrom_top(a, grid_lo)[-1])
    lam_hi = float(_nystrom_top(a, grid_hi)[-1])
    margin = max(1e-6, abs(lam_hi - lam_lo))
    return lam_hi > PI + margin, margin, lam_lo, lam_hi


def estimate_a_star(tolerance=0.02, config=None, bracket=(0.3, 2.0)):
    """Bisection bracket for the parameter where the top eigenvalue leaves pi.

    Runs at two successive discretization levels; the finer bracket is the
    headline, the coarser one is attached (they must be nested or
    overlapping).  The endpoints default to 0.3 (an eigenvalue above pi must
    exist: 1/a > pi) and 2.0 (none can: the kernel is dominated by 1/t).
    """
    if tolerance < 1e-3:
        raise ConfigurationError(f"tolerance must be >= 1e-3, got {tolerance}")
    config = config or ExperimentConfig()
    grids = [config.grid(level) for level in range(3)]
    evaluations = []

    def run_level(pair, label):
        lo, hi = bracket
        ind_lo = _indicator(lo, *pair)
        ind_hi = _indicator(hi, *pair)
        evaluations.append((label, lo) + ind_lo)
        evaluations.append((label, hi) + ind_hi)
        if not ind_lo[0] or ind_hi[0]:
            scan = [(a,) + _indicator(a, *pair) for a in np.linspace(lo, hi, 9)]
            raise DiagnosticError(
                "eigenvalue indicator is not monotone across the bracket "
                f"at level {label}", scan=scan)
        margin = max(ind_lo[1], ind_hi[1])
        while hi - lo > tolerance:
            mid = 0.5 * (lo + hi)
            ind = _indicator(mid, *pair)
            evaluations.append((label, mid) + ind)
            margin = max(margin, ind[1])
            if ind[0]:
                lo = mid
            else:
                hi = mid
        return lo, hi, margin

    coarse = run_level((grids[0], grids[1]), "coarse")
    fine = run_level((grids[1], grids[2]), "fine")
    if fine[1] < coarse[0] or fine[0] > coarse[1]:
        raise DiagnosticError(
            f"brackets at successive levels are disjoint: {coarse[:2]} vs {fine[:2]}",
            scan=tuple(evaluations))
    return AStarEstimate(
        a_lo=fine[0], a_hi=fine[1], indicator_margin=fine[2],
        discretization={"coarse": [config.describe(0), config.describe(1)],
                        "fine": [config.describe(1), config.describe(2)]},
        coarse_bracket=coarse[:2], evaluations=tuple(evaluations))


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalue census of one operator discretization."""

    label: str
    eigenvalues: np.ndarray
    bin_edges: np.ndarray
    histogram: np.ndarray
    count_above_pi: int
    count_below_zero: int
    fill_fraction: float
    fill_by_level: tuple

    def to_dict(self):
        return {
            "label": self.label,
            "dim": int(self.eigenvalues.size),
            "count_above_pi": self.count_above_pi,
            "count_below_zero": self.count_below_zero,
            "fill_fraction": self.fill_fraction,
            "fill_by_level": list(self.fill_by_level),
            "top_eigenvalues": [float(v) for v in self.eigenvalues[-10:][::-1]],
        }


def _census(values, label, fill_by_level):
    edges = np.linspace(0.0, PI, 33)
    hist, _ = np.histogram(values, bins=edges)
    fill = float(np.count_nonzero(hist)) / 32.0
    return SpectrumReport(
        label=label, eigenvalues=values, bin_edges=edges, histogram=hist,
        count_above_pi=count_above(values, PI + ABOVE_PI_TOL),
        count_below_zero=int(np.sum(values < BELOW_ZERO_TOL)),
        fill_fraction=fill, fill_by_level=tuple(fill_by_level))


def spectrum_report(source, config=None, ladder_levels=3):
    """Full eigenvalue census with a 32-bin histogram over [0, pi].

    For a kernel spec the fill metric is tracked across a widening refinement
    ladder; for a Helson truncation, across nested truncation orders.
    """
    config = config or ExperimentConfig()
    if isinstance(source, HelsonTruncation):
        values = eigen_full(source.matrix).values
        fills = []
        for idx in range(ladder_levels):
            order = max(source.n_min + 1, source.order >> (ladder_levels - 1 - idx))
            if source.a == 0.0:
                sub = multiplicative_hilbert_matrix(order)
            else:
                sub = helson_matrix(source.a, order)
            sub_vals = eigen_full(sub.matrix).values
            edges = np.linspace(0.0, PI, 33)
            hist, _ = np.histogram(sub_vals, bins=edges)
            fills.append((f"N={order}", float(np.count_nonzero(hist)) / 32.0))
        label = f"helson(a={source.a}, N={source.order}, n_min={source.n_min})"
        return _census(values, label, fills)
    spec = source
    fills = []
    values = None
    for level in range(ladder_levels):
        grid = config.grid(level)
        vals = eigen_full(discretize_hankel(spec, grid)).values
        if level == 0:
            values = vals
        edges = np.linspace(0.0, PI, 33)
        hist, _ = np.histogram(vals, bins=edges)
        fills.append((f"level={level} ({grid.size} nodes)",
                      float(np.count_nonzero(hist)) / 32.0))
    label = f"nystrom({spec.family.value}, a={spec.a})"
    return _census(values, label, fills)


# Equivalence checks run on a grid with t_min of order 1: there the N-term
# factor map resolves the zeta kernel (its tail is below N^{-2 t_min}), so
# the Helson-side and Hankel-side spectra can actually be compared.
EQUIV_T_MIN = 0.75
EQUIV_T_MAX = 80.0


@dataclass(frozen=True)
class EquivalenceReport:
    a: float
    n_min: int
    order: int
    eigs_outer: tuple        # top eigenvalues of F F^T  (Helson side)
    eigs_inner: tuple        # top eigenvalues of F^T F  (grid side)
    eigs_nystrom: tuple      # top eigenvalues of the direct Nystrom matrix
    pair_disagreement: float  # max |outer - inner| over the top r
    nystrom_gap: float        # max |inner - nystrom| over the top r
    refined_nystrom_gap: float  # same with the truncation order doubled
    gap_ratio: float


def equivalence_check(a, N=256, grid=None, top_r=10):
    """Compare the three spectra realizing the factorization identities.

    (i) F F^T and (ii) F^T F must agree to working precision (an exact
    finite-dimensional fact); (iii) the direct Nystrom matrix of the zeta
    kernel differs from (ii) only by the N-term truncation of the zeta
    series, a gap that shrinks as N grows (refinement step: N doubled).
    """
    if a < 0.0:
        raise DomainError(f"equivalence_check requires a >= 0, got {a}")
    n_min = 2 if a == 0.0 else 1
    grid = grid or build_grid(EQUIV_T_MIN, EQUIV_T_MAX, 4, 16)
    fam = KernelFamily.H0 if a == 0.0 else KernelFamily.HA
    spec = KernelSpec(fam, a if a > 0.0 else 0.0)
    nys = eigen_full(discretize_hankel(spec, grid)).values[::-1][:top_r]

    def gram_spectra(order):
        F = factor_map(a, n_min, order + n_min - 1, grid)
        outer = np.linalg.eigvalsh(F @ F.T)[::-1][:top_r]
        inner = np.linalg.eigvalsh(F.T @ F)[::-1][:top_r]
        return outer, inner

    outer, inner = gram_spectra(N)
    outer2, inner2 = gram_spectra(2 * N)
    gap = float(np.abs(inner - nys).max())
    gap2 = float(np.abs(inner2 - nys).max())
    return EquivalenceReport(
        a=float(a), n_min=n_min, order=int(N),
        eigs_outer=tuple(map(float, outer)),
        eigs_inner=tuple(map(float, inner)),
        eigs_nystrom=tuple(map(float, nys)),
        pair_disagreement=float(np.abs(outer - inner).max()),
        nystrom_gap=gap,
        refined_nystrom_gap=gap2,
        gap_ratio=gap2 / gap if gap > 0.0 else 0.0)


# The projected generalized eigenfunctions are eigenvectors of the Nystrom
# matrix only away from the domain edges: psi_k oscillates without decay as
# t -> 0, so the truncated Hankel integral is order-one wrong in the first
# few nodes.  The residual is therefore taken over an interior window with a
# fixed margin (in decades) from each edge; the margin-free norm carries no
# information (it cannot distinguish the true eigenvalue from a wrong one).
RESIDUAL_MARGIN_DECADES = 8.0


def eigenfunction_residual(k, grid=None, window=None, lambda_value=None):
    """Relative residual of H(h_*) psi_k = lambda(k) psi_k on the grid interior.

    ||(A v - lambda v)|_W|| / (lambda ||v|_W||) with A the Nystrom HStar
    matrix, v the projected psi_k and W the evaluation window.  The default
    window trims RESIDUAL_MARGIN_DECADES decades from each end; a refinement
    ladder should widen the grid while holding the window fixed, so that the
    edge error recedes from the measured region.  ``lambda_value`` overrides
    lambda(k) for power checks of the test itself.
    """
    grid = grid or reference_grid()
    lam = lambda_of_k(k) if lambda_value is None else float(lambda_value)
    A = discretize_hankel(KernelSpec(KernelFamily.HSTAR), grid)
    v = project_function(lambda t: psi_k(k, t), grid)
    r = A.array @ v - lam * v
    if window is None:
        margin = 10.0 ** RESIDUAL_MARGIN_DECADES
        window = (grid.t_min * margin, grid.t_max / margin)
    lo, hi = window
    mask = (grid.nodes >= lo) & (grid.nodes <= hi) if lo < hi else np.ones_like(v, bool)
    if not np.any(mask):
        mask = np.ones_like(v, bool)
    return float(np.linalg.norm(r[mask]) / (lam * np.linalg.norm(v[mask])))


def hs_gap(spec, grid=None, refine_decades=2.0, stability_rtol=0.01):
    """The Hilbert-Schmidt weight integral int t (h(t) - h_*(t))^2 dt.

    Finite and refinement-stable for the zeta kernels, whose difference from
    h_* decays at both ends.  Divergence under domain widening (the Carleman
    kernel differs from h_* by ~1/t at infinity) returns inf as a misuse
    sentinel rather than a spurious number.
    """
    grid = grid or reference_grid()
    hstar = KernelSpec(KernelFamily.HSTAR)

    def integrand(t):
        diff = kernel_eval(spec, t) - kernel_eval(hstar, t)
        return t * diff * diff

    value = quad_integral(integrand, grid)
    widened = quad_integral(integrand, grid.widened(refine_decades))
    if abs(widened - value) > stability_rtol * max(abs(value), 1e-300):
        return float("inf")
    return value


def _lcg_uniform(count, dim, seed=LCG_SEED):
    """Deterministic uniform [-1, 1] matrix from a 64-bit linear congruential
    generator (Knuth multiplier), independent of numpy's RNG stream."""
    state = seed & 0xFFFFFFFFFFFFFFFF
    out = np.empty((count, dim))
    for i in range(count):
        for j in range(dim):
            state = (6364136223846793005 * state + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
            out[i, j] = 2.0 * (state / 18446744073709551616.0) - 1.0
    return out


@dataclass(frozen=True)
class MonotonicityReport:
    a: float
    b: float
    trials: int
    passes: int
    max_violation: float
    top_eig_a: float
    top_eig_b: float
    eig_ok: bool

    @property
    def ok(self):
        return self.passes == self.trials and self.eig_ok


def monotonicity_check(a, b, trials=100, N=128, grid=None, seed=LCG_SEED):
    """Quadratic-form monotonicity of M(g_a) in a on random vectors.

    For 0 < b <= a every form must satisfy q_a(x) <= q_b(x) (up to 1e-12
    relative), and the truncation top eigenvalues must be ordered the same
    way.  The forms are the grid quadratures of int e^{-at} |f_x(t)|^2 dt,
    batched over all trial vectors.
    """
    if not 0.0 < b <= a:
        raise DomainError(f"monotonicity_check requires 0 < b <= a, got a={a}, b={b}")
    grid = grid or reference_grid()
    X = _lcg_uniform(trials, N, seed)
    n = np.arange(1, N + 1, dtype=np.float64)
    powers = np.exp(np.outer(-np.log(n), 0.5 + grid.nodes))
    G2 = (X @ powers) ** 2
    forms_a = G2 @ (grid.weights * np.exp(-a * grid.nodes))
    forms_b = G2 @ (grid.weights * np.exp(-b * grid.nodes))
    ok = forms_a <= forms_b + 1e-12 * np.abs(forms_b)
    ta = _truncation_top(a, N)
    tb = _truncation_top(b, N)
    return MonotonicityReport(a, b, trials, int(np.sum(ok)),
                              float(np.max(forms_a - forms_b)), ta, tb,
                              ta <= tb + 1e-10)


@dataclass(frozen=True)
class MultiplicityReport:
    window: tuple
    carleman_count: int
    hstar_count: int
    ratio: Optional[float]
    refined_carleman_count: int
    refined_hstar_count: int
    refined_ratio: Optional[float]
    sufficient: bool


def multiplicity_diagnostic(window=(0.5, 2.5), grid=None, min_count=5):
    """Exploratory spectral-multiplicity probe (not an acceptance gate).

    Counts discretized eigenvalues of the Carleman operator and of H(h_*) in
    an interior window of (0, pi).  The Carleman kernel is singular at both
    ends of (0, inf) and carries the window twice over; the expected count
    ratio is 2 in the refinement limit.  Counts below ``min_count`` make the
    ratio meaningless and are reported as insufficient.
    """
    lo, hi = float(window[0]), float(window[1])
    if not (0.0 < lo < hi < PI):
        raise DomainError(f"window must satisfy 0 < lo < hi < pi, got {window}")
    grid = grid or reference_grid()

    def counts(g):
        ec = eigen_full(discretize_hankel(KernelSpec(KernelFamily.CARLEMAN), g)).values
        eh = eigen_full(discretize_hankel(KernelSpec(KernelFamily.HSTAR), g)).values
        cc = int(np.sum((ec > lo) & (ec < hi)))
        ch = int(np.sum((eh > lo) & (eh < hi)))
        return cc, ch

    cc, ch = counts(grid)
    cc2, ch2 = counts(grid.widened(2.0))
    sufficient = min(cc, ch) >= min_count
    ratio = cc / ch if sufficient else None
    ratio2 = cc2 / ch2 if min(cc2, ch2) >= min_count else None
    return MultiplicityReport((lo, hi), cc, ch, ratio, cc2, ch2, ratio2, sufficient)
