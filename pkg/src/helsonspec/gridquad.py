"""Discrete models of L^2(0, inf): composite Gauss-Legendre grids on
geometric panels, symmetric Nystrom discretization of integral Hankel
operators, and function embedding.
"""

import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _backend
from .errors import ConfigurationError, DomainError, NumericError
from .specialfn import KernelFamily, KernelSpec, kernel_eval

__all__ = [
    "Grid",
    "build_grid",
    "reference_grid",
    "SymmetricMatrix",
    "discretize_hankel",
    "project_function",
    "quad_integral",
    "save_matrix",
    "load_matrix",
]

# Reference discretization: wide enough that the Nystrom Carleman operator
# reaches pi - 0.043 (its truncation gap scales like (log-length)^-2), small
# enough that a dense eigensolve stays well under a second.
REFERENCE_T_MIN = 1e-12
REFERENCE_T_MAX = 1e12
REFERENCE_PANELS_PER_DECADE = 4
REFERENCE_NODES_PER_PANEL = 16


@lru_cache(maxsize=32)
def _gl_rule(n):
    return leggauss(n)


@dataclass(frozen=True)
class Grid:
    """Quadrature nodes and weights on [t_min, t_max].

    Nodes are strictly increasing and interior; weights are positive and
    partition the interval (sum w = t_max - t_min).
    """

    nodes: np.ndarray
    weights: np.ndarray
    t_min: float
    t_max: float
    panels_per_decade: int = 0
    nodes_per_panel: int = 0
    sqrt_weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise ConfigurationError("grid nodes/weights must be matching 1-d arrays")
        if not (self.t_min > 0.0 and self.t_max > self.t_min):
            raise ConfigurationError(
                f"grid bounds must satisfy 0 < t_min < t_max, got [{self.t_min}, {self.t_max}]"
            )
        if np.any(np.diff(nodes) <= 0.0):
            raise ConfigurationError("grid nodes must be strictly increasing")
        if nodes[0] < self.t_min or nodes[-1] > self.t_max:
            raise ConfigurationError("grid nodes must lie inside [t_min, t_max]")
        if np.any(weights <= 0.0):
            raise ConfigurationError("grid weights must be strictly positive")
        span = self.t_max - self.t_min
        if abs(weights.sum() - span) > 1e-12 * span:
            raise ConfigurationError("grid weights must partition [t_min, t_max]")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "sqrt_weights", np.sqrt(weights))

    @property
    def size(self):
        return self.nodes.size

    def widened(self, decades_each_side, ppd_increment=0):
        """A new grid extended geometrically on both sides, same panel density."""
        f = 10.0 ** decades_each_side
        ppd = max(1, self.panels_per_decade + ppd_increment)
        npp = max(2, self.nodes_per_panel)
        return build_grid(self.t_min / f, self.t_max * f, ppd, npp)


def build_grid(t_min, t_max, panels_per_decade=REFERENCE_PANELS_PER_DECADE,
               nodes_per_panel=REFERENCE_NODES_PER_PANEL):
    """Composite Gauss-Legendre grid with panels of equal width in log t.

    The Carleman-type kernels are homogeneous of degree -1, so panels per
    decade is the natural refinement unit.
    """
    if not (t_min > 0.0 and t_max > t_min):
        raise ConfigurationError(f"invalid grid bounds [{t_min}, {t_max}]")
    if panels_per_decade < 1 or nodes_per_panel < 2:
        raise ConfigurationError(
            "need panels_per_decade >= 1 and nodes_per_panel >= 2, got "
            f"{panels_per_decade}/{nodes_per_panel}"
        )
    decades = math.log10(t_max / t_min)
    panels = max(1, math.ceil(decades * panels_per_decade - 1e-9))
    edges = t_min * (t_max / t_min) ** (np.arange(panels + 1) / panels)
    edges[0], edges[-1] = t_min, t_max
    xg, wg = _gl_rule(nodes_per_panel)
    centers = 0.5 * (edges[1:] + edges[:-1])
    halves = 0.5 * (edges[1:] - edges[:-1])
    nodes = (centers[:, None] + halves[:, None] * xg[None, :]).ravel()
    weights = (halves[:, None] * wg[None, :]).ravel()
    return Grid(nodes, weights, float(t_min), float(t_max),
                int(panels_per_decade), int(nodes_per_panel))


def reference_grid():
    return build_grid(REFERENCE_T_MIN, REFERENCE_T_MAX)


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric operator; symmetry is exact by construction."""

    array: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.array, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ConfigurationError("SymmetricMatrix requires a square array")
        if not np.array_equal(a, a.T):
            raise ConfigurationError("SymmetricMatrix requires exact symmetry")
        if not np.all(np.isfinite(a)):
            raise NumericError("SymmetricMatrix entries must be finite")
        object.__setattr__(self, "array", a)

    @property
    def dim(self):
        return self.array.shape[0]

    def matvec(self, x):
        return self.array @ x


def discretize_hankel(spec, grid):
    """Symmetrized Nystrom matrix A_ij = sqrt(w_i w_j) h(t_i + t_j)."""
    t = grid.nodes
    sw = grid.sqrt_weights
    fam = spec.family
    if fam in (KernelFamily.H0, KernelFamily.HA, KernelFamily.WA):
        a = spec.a if fam is not KernelFamily.H0 else 0.0
        minus_one = fam in (KernelFamily.H0, KernelFamily.WA)
        arr = _backend.zeta_hankel_matrix(t, sw, a, minus_one)
    else:
        u = t[:, None] + t[None, :]
        if fam is KernelFamily.CARLEMAN:
            vals = 1.0 / u
        elif fam is KernelFamily.HSTAR:
            vals = np.exp(-0.5 * u) / u
        else:  # RANK_ONE_EXP
            vals = np.exp(-0.5 * spec.a * u)
        arr = (sw[:, None] * sw[None, :]) * vals
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"kernel {fam.value} produced non-finite matrix entries")
    return SymmetricMatrix(arr)


def project_function(f, grid):
    """Embed a function: v_i = sqrt(w_i) f(t_i).

    Euclidean inner products of projections then approximate L^2 inner
    products, and ||v||^2 approximates the squared L^2 norm on the interval.
    """
    vals = np.asarray(f(grid.nodes), dtype=np.float64)
    if vals.shape != grid.nodes.shape:
        vals = np.broadcast_to(vals, grid.nodes.shape).astype(np.float64)
    if not np.all(np.isfinite(vals)):
        raise NumericError("function produced non-finite samples on the grid")
    return grid.sqrt_weights * vals


def quad_integral(f, grid):
    """Quadrature value sum_i w_i f(t_i)."""
    vals = np.asarray(f(grid.nodes), dtype=np.float64)
    if vals.shape != grid.nodes.shape:
        vals = np.broadcast_to(vals, grid.nodes.shape).astype(np.float64)
    if not np.all(np.isfinite(vals)):
        raise NumericError("function produced non-finite samples on the grid")
    return float(np.dot(grid.weights, vals))


# ---------------------------------------------------------------------------
# Binary dump: 16-byte header (magic "HSPC", version u32, dim u32, reserved
# u32), then the row-major upper triangle as little-endian float64.

_MAGIC = b"HSPC"
_FORMAT_VERSION = 1


def save_matrix(matrix, path):
    a = matrix.array
    dim = matrix.dim
    idx = np.triu_indices(dim)
    upper = np.ascontiguousarray(a[idx], dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", _FORMAT_VERSION, dim, 0))
        fh.write(upper.tobytes())


def load_matrix(path):
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16 or header[:4] != _MAGIC:
            raise ConfigurationError(f"not a HSPC matrix file: {path}")
        version, dim, _ = struct.unpack("<III", header[4:])
        if version != _FORMAT_VERSION:
            raise ConfigurationError(f"unsupported HSPC version {version}")
        count = dim * (dim + 1) // 2
        upper = np.frombuffer(fh.read(8 * count), dtype="<f8")
        if upper.size != count:
            raise ConfigurationError(f"truncated HSPC matrix file: {path}")
    a = np.zeros((dim, dim))
    idx = np.triu_indices(dim)
    a[idx] = upper
    low = np.tril_indices(dim, -1)
    a[low] = a.T[low]
    return SymmetricMatrix(a)
