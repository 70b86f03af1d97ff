"""Command line front end: config parsing, experiment dispatch, CSV/JSON
emission and a content-addressed result cache.

Outputs are deterministic for a fixed config and artifact version; files are
named ``<command>-<cachekey>.<ext>`` and the JSON document (which is what the
cache stores) embeds the full config echo.
"""

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .errors import (
    ConfigurationError,
    DiagnosticError,
    DomainError,
    HelsonSpecError,
    IterationError,
    NumericError,
    UsageError,
)
from .eigensolve import eigen_full
from .gridquad import build_grid, discretize_hankel, save_matrix
from .helson import helson_matrix, multiplicative_hilbert_matrix
from .mellin import (
    carleman_multiplier,
    multiplier_check,
    plancherel_error,
    theta_zero,
)
from .spectra import (
    ExperimentConfig,
    eigenfunction_residual,
    equivalence_check,
    estimate_a_star,
    hs_gap,
    lambda_curve,
    multiplicity_diagnostic,
    spectrum_report,
)
from .specialfn import KernelFamily, KernelSpec, lambda_of_k

COMMANDS = ("matrix", "spectrum", "curve", "critical-a", "mellin-check",
            "residual", "equivalence", "report")

KERNEL_FAMILIES = {f.value: f for f in KernelFamily}
MATRIX_FAMILIES = ("helson", "mult-hilbert") + tuple(KERNEL_FAMILIES)

CACHE_ENV_VAR = "HELSON_CACHE_DIR"


@dataclass
class RunConfig:
    """Validated, canonical run description; its digest is the cache key."""

    command: str
    family: str = "ha"
    a: float = 1.0
    N: int = 512
    n_min: int = 1
    t_min: float = 1e-12
    t_max: float = 1e12
    panels_per_decade: int = 4
    nodes_per_panel: int = 16
    a_min: float = 0.05
    a_max: float = 2.0
    a_steps: int = 20
    tol: float = 0.02
    k: float = 0.5
    window_lo: float = 0.5
    window_hi: float = 2.5
    format: str = "both"
    out_dir: str = "."
    cache_dir: str = ""

    def canonical_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)
                if f.name not in ("out_dir", "cache_dir", "format")}

    def cache_key(self):
        payload = json.dumps(self.canonical_dict(), sort_keys=True) + __version__
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def grid(self):
        return build_grid(self.t_min, self.t_max,
                          self.panels_per_decade, self.nodes_per_panel)

    def experiment_config(self):
        return ExperimentConfig(self.t_min, self.t_max, self.panels_per_decade,
                                self.nodes_per_panel,
                                truncation_sizes=(self.N // 4 or 1, self.N))


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_FLOAT_KEYS = {"a", "t_min", "t_max", "a_min", "a_max", "tol", "k",
               "window_lo", "window_hi"}
_INT_KEYS = {"N", "n_min", "panels_per_decade", "nodes_per_panel", "a_steps"}


def _coerce(key, raw):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
    except ValueError:
        raise UsageError(f"bad value for {key}: {raw!r}")
    return raw


def _read_config_file(path):
    """Flat key = value format; '#' starts a comment; dashes equal underscores."""
    values = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, raw = (part.strip() for part in line.split("=", 1))
                values[key.replace("-", "_")] = raw
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    return values


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="helsonspec",
        description="Spectral experiments on Helson matrices, the multiplicative "
                    "Hilbert matrix and their integral Hankel counterparts.")
    sub = parser.add_subparsers(dest="command")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--t-min", type=float, dest="t_min")
    common.add_argument("--t-max", type=float, dest="t_max")
    common.add_argument("--panels-per-decade", type=int, dest="panels_per_decade")
    common.add_argument("--nodes-per-panel", type=int, dest="nodes_per_panel")
    common.add_argument("--format", choices=("csv", "json", "both"))
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--cache-dir", dest="cache_dir")

    p = sub.add_parser("matrix", parents=[common], help="assemble one matrix")
    p.add_argument("--family", choices=MATRIX_FAMILIES)
    p.add_argument("--a", type=float)
    p.add_argument("--N", type=int)

    p = sub.add_parser("spectrum", parents=[common], help="full eigenvalue list")
    p.add_argument("--family", choices=MATRIX_FAMILIES)
    p.add_argument("--a", type=float)
    p.add_argument("--N", type=int)

    p = sub.add_parser("curve", parents=[common], help="lambda(a) curve")
    p.add_argument("--a-min", type=float, dest="a_min")
    p.add_argument("--a-max", type=float, dest="a_max")
    p.add_argument("--a-steps", type=int, dest="a_steps")
    p.add_argument("--N", type=int)

    p = sub.add_parser("critical-a", parents=[common], help="bisect the a* bracket")
    p.add_argument("--tol", type=float)

    sub.add_parser("mellin-check", parents=[common],
                   help="Plancherel, multiplier and zero-locus checks")

    p = sub.add_parser("residual", parents=[common],
                       help="eigenfunction residual of psi_k")
    p.add_argument("--k", type=float)

    p = sub.add_parser("equivalence", parents=[common],
                       help="factorization equivalence of the three spectra")
    p.add_argument("--a", type=float)
    p.add_argument("--N", type=int)

    p = sub.add_parser("report", parents=[common],
                       help="combined spectrum/moment report for one kernel")
    p.add_argument("--family", choices=MATRIX_FAMILIES)
    p.add_argument("--a", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--window-lo", type=float, dest="window_lo")
    p.add_argument("--window-hi", type=float, dest="window_hi")
    return parser


def parse_config(argv):
    """Parse flags (and an optional flat config file; flags win) to a RunConfig."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise UsageError("invalid command line") from None
        raise
    if not ns.command:
        raise UsageError("missing command; see --help")

    merged = {}
    if getattr(ns, "config", None):
        for key, raw in _read_config_file(ns.config).items():
            if key == "command":
                continue
            if key not in _FIELD_TYPES:
                raise UsageError(f"unknown config key: {key}")
            merged[key] = _coerce(key, raw)
    for key, value in vars(ns).items():
        if key in ("config", "command") or value is None:
            continue
        merged[key] = value

    config = RunConfig(command=ns.command, **merged)
    _validate(config)
    return config


def _validate(config):
    if config.command not in COMMANDS:
        raise UsageError(f"unknown command {config.command!r}")
    if config.command in ("matrix", "spectrum", "report"):
        if config.family not in MATRIX_FAMILIES:
            raise UsageError(f"config.family: unknown family {config.family!r}")
        if config.family == "helson" and not config.a > 0.0:
            raise UsageError("config.a: family helson requires a > 0 "
                             "(use family mult-hilbert for a = 0)")
        if config.family in ("ha", "wa", "rank-one-exp") and not config.a > 0.0:
            raise UsageError(f"config.a: family {config.family} requires a > 0")
        if config.family == "mult-hilbert" and config.N < 2:
            raise UsageError("config.N: mult-hilbert requires N >= 2")
    if config.command == "equivalence" and config.a < 0.0:
        raise UsageError("config.a: equivalence requires a >= 0")
    if not (config.t_min > 0.0 and config.t_max > config.t_min):
        raise UsageError("config.t_min/t_max: need 0 < t_min < t_max")
    if config.panels_per_decade < 1 or config.nodes_per_panel < 2:
        raise UsageError("config.panels_per_decade/nodes_per_panel: need >= 1 / >= 2")
    if config.N < 1:
        raise UsageError("config.N: need N >= 1")
    if config.command == "curve":
        if not (0.0 < config.a_min < config.a_max):
            raise UsageError("config.a_min/a_max: need 0 < a_min < a_max")
        if config.a_steps < 1:
            raise UsageError("config.a_steps: need >= 1")
    if config.command == "critical-a" and config.tol < 1e-3:
        raise UsageError("config.tol: need >= 1e-3")
    if config.command == "residual" and not 0.0 < config.k <= 20.0:
        raise UsageError("config.k: need 0 < k <= 20")
    if config.command == "report" and not (0.0 < config.window_lo < config.window_hi < math.pi):
        raise UsageError("config.window_lo/window_hi: need 0 < lo < hi < pi")
    if config.format not in ("csv", "json", "both"):
        raise UsageError(f"config.format: unknown format {config.format!r}")


def _fmt(x):
    return f"{float(x):.17g}"


def _a_values(config):
    return list(np.exp(np.linspace(math.log(config.a_min), math.log(config.a_max),
                                   config.a_steps)))


def _truncation(config):
    if config.family == "mult-hilbert":
        return multiplicative_hilbert_matrix(config.N)
    return helson_matrix(config.a, config.N)


def _kernel_spec(config):
    fam = KERNEL_FAMILIES[config.family]
    return KernelSpec(fam, config.a if fam.value in ("ha", "wa", "rank-one-exp") else 0.0)


# ---------------------------------------------------------------------------
# command implementations: each returns (results_dict, csv_rows, csv_header)

def _run_matrix(config):
    if config.family in ("helson", "mult-hilbert"):
        matrix = _truncation(config).matrix
    else:
        matrix = discretize_hankel(_kernel_spec(config), config.grid())
    os.makedirs(config.out_dir, exist_ok=True)
    path = os.path.join(config.out_dir,
                        f"matrix-{config.cache_key()}.hspc")
    save_matrix(matrix, path)
    results = {"dim": matrix.dim, "trace": float(np.trace(matrix.array)),
               "frobenius": float(np.linalg.norm(matrix.array)),
               "binary_path": os.path.basename(path)}
    rows = [[str(matrix.dim), _fmt(results["trace"]), _fmt(results["frobenius"])]]
    return results, rows, "dim,trace,frobenius"


def _run_spectrum(config):
    if config.family in ("helson", "mult-hilbert"):
        matrix = _truncation(config).matrix
    else:
        matrix = discretize_hankel(_kernel_spec(config), config.grid())
    values = eigen_full(matrix).values
    results = {
        "dim": int(values.size),
        "count_above_pi": int(np.sum(values > math.pi + 1e-8)),
        "count_below_zero": int(np.sum(values < -1e-10)),
        "top": float(values[-1]),
        "bottom": float(values[0]),
        "eigenvalues": [float(v) for v in values],
    }
    rows = [[str(i), _fmt(v)] for i, v in enumerate(values)]
    return results, rows, "index,eigenvalue"


def _run_curve(config):
    points = lambda_curve(_a_values(config), config.experiment_config())
    rows = []
    out_points = []
    for p in points:
        rows.append([_fmt(p.a), _fmt(p.lambda_nystrom), _fmt(p.lambda_trunc[-1][1]),
                     _fmt(p.lower_bound), _fmt(p.upper_bound),
                     "1" if p.above_pi else "0"])
        out_points.append({
            "a": p.a, "lambda_nystrom": p.lambda_nystrom,
            "lambda_trunc": [[int(n), v] for n, v in p.lambda_trunc],
            "lambda_lower_bound": p.lower_bound,
            "lambda_upper_bound": p.upper_bound,
            "above_pi": p.above_pi, "bounds_ok": p.bounds_ok,
        })
    header = "a,lambda_nystrom,lambda_trunc_N,lambda_lower_bound,lambda_upper_bound,above_pi"
    return {"points": out_points}, rows, header


def _run_critical_a(config):
    est = estimate_a_star(config.tol, config.experiment_config())
    results = {
        "a_lo": est.a_lo, "a_hi": est.a_hi,
        "width": est.a_hi - est.a_lo,
        "indicator_margin": est.indicator_margin,
        "coarse_bracket": list(est.coarse_bracket),
        "discretization": est.discretization,
    }
    rows = [[_fmt(est.a_lo), _fmt(est.a_hi), _fmt(est.a_hi - est.a_lo),
             _fmt(est.indicator_margin)]]
    return results, rows, "a_lo,a_hi,width,indicator_margin"


def _run_mellin_check(config):
    wide = (math.exp(-34.0), math.exp(14.0))
    checks = [
        ("plancherel_exp", plancherel_error(lambda t: np.exp(-t), wide, 8192), 1e-6),
        ("plancherel_log_gaussian",
         plancherel_error(lambda t: np.exp(-np.log(t) ** 2)), 1e-8),
        ("multiplier_log_gaussian",
         multiplier_check(lambda t: np.exp(-np.log(t) ** 2), config.grid()), 1e-3),
    ]
    taus = np.linspace(0.0, 6.0, 25)
    ident = max(abs(carleman_multiplier(t) - lambda_of_k(abs(t))) for t in taus)
    checks.append(("multiplier_equals_lambda", ident, 1e-15))
    ks = np.linspace(0.01, 3.0, 25)
    rt = max(abs(theta_zero(lambda_of_k(k)) - k) for k in ks)
    checks.append(("theta_zero_roundtrip", rt, 1e-10))
    rows = [[name, _fmt(value), _fmt(thr), "1" if value <= thr else "0"]
            for name, value, thr in checks]
    results = {name: {"value": value, "threshold": thr, "pass": value <= thr}
               for name, value, thr in checks}
    results["all_pass"] = all(v <= t for _, v, t in checks)
    return results, rows, "check,value,threshold,pass"


def _run_residual(config):
    value = eigenfunction_residual(config.k, config.grid())
    return ({"k": config.k, "residual": value},
            [[_fmt(config.k), _fmt(value)]], "k,residual")


def _run_equivalence(config):
    rep = equivalence_check(config.a, config.N)
    results = {
        "a": rep.a, "N": rep.order, "n_min": rep.n_min,
        "pair_disagreement": rep.pair_disagreement,
        "nystrom_gap": rep.nystrom_gap,
        "refined_nystrom_gap": rep.refined_nystrom_gap,
        "gap_ratio": rep.gap_ratio,
        "eigs_outer": list(rep.eigs_outer),
        "eigs_inner": list(rep.eigs_inner),
        "eigs_nystrom": list(rep.eigs_nystrom),
    }
    rows = [[str(i), _fmt(o), _fmt(v), _fmt(ny)]
            for i, (o, v, ny) in enumerate(zip(rep.eigs_outer, rep.eigs_inner,
                                               rep.eigs_nystrom), 1)]
    return results, rows, "rank,outer_gram,inner_gram,nystrom"


def _run_report(config):
    if config.family in ("helson", "mult-hilbert"):
        rep = spectrum_report(_truncation(config), config.experiment_config())
        gap = None
    else:
        spec = _kernel_spec(config)
        rep = spectrum_report(spec, config.experiment_config())
        gap = (hs_gap(spec, config.grid())
               if spec.family.value in ("h0", "ha", "carleman") else None)
    mult = multiplicity_diagnostic((config.window_lo, config.window_hi),
                                   config.grid())
    results = rep.to_dict()
    results["hs_gap"] = "divergent" if gap is not None and math.isinf(gap) else gap
    results["multiplicity"] = {
        "window": list(mult.window),
        "carleman_count": mult.carleman_count,
        "hstar_count": mult.hstar_count,
        "ratio": mult.ratio,
        "refined_ratio": mult.refined_ratio,
        "sufficient": mult.sufficient,
    }
    rows = [[str(i), _fmt(lo), _fmt(hi), str(int(c))]
            for i, (lo, hi, c) in enumerate(zip(rep.bin_edges[:-1], rep.bin_edges[1:],
                                                rep.histogram))]
    return results, rows, "bin,lower,upper,count"


_RUNNERS = {
    "matrix": _run_matrix,
    "spectrum": _run_spectrum,
    "curve": _run_curve,
    "critical-a": _run_critical_a,
    "mellin-check": _run_mellin_check,
    "residual": _run_residual,
    "equivalence": _run_equivalence,
    "report": _run_report,
}


def _cache_dir(config):
    if config.cache_dir:
        return config.cache_dir
    env = os.environ.get(CACHE_ENV_VAR, "")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "helsonspec")


def _atomic_write(path, data):
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-helsonspec-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_outputs(document, config):
    """Emit the CSV table and/or JSON document for a computed result."""
    key = document["cache_key"]
    os.makedirs(config.out_dir, exist_ok=True)
    written = []
    if config.format in ("json", "both"):
        path = os.path.join(config.out_dir, f"{config.command}-{key}.json")
        _atomic_write(path, json.dumps(document, sort_keys=True, indent=2) + "\n")
        written.append(path)
    if config.format in ("csv", "both"):
        path = os.path.join(config.out_dir, f"{config.command}-{key}.csv")
        lines = [document["csv_header"]]
        lines += [",".join(row) for row in document["csv_rows"]]
        _atomic_write(path, "\n".join(lines) + "\n")
        written.append(path)
    return written


def dispatch(config, log=None):
    """Run the configured command, consulting the result cache first.

    The matrix command always recomputes: its main artifact is the binary
    dump, which the cache does not store (storage-cheap policy).
    """
    log = log or (lambda msg: print(msg, file=sys.stderr))
    key = config.cache_key()
    cache_path = os.path.join(_cache_dir(config), f"{key}.json")
    document = None
    if config.command != "matrix" and os.path.exists(cache_path):
        try:
            with open(cache_path) as fh:
                document = json.load(fh)
            log(f"cache hit {key}")
        except (OSError, json.JSONDecodeError):
            document = None
    if document is None:
        results, rows, header = _RUNNERS[config.command](config)
        document = {
            "version": __version__,
            "command": config.command,
            "cache_key": key,
            "config": config.canonical_dict(),
            "results": results,
            "csv_header": header,
            "csv_rows": rows,
        }
        _atomic_write(cache_path, json.dumps(document, sort_keys=True) + "\n")
    written = write_outputs(document, config)
    for path in written:
        log(f"wrote {path}")
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return dispatch(config)
    except (UsageError, ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, IterationError, DiagnosticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    except HelsonSpecError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
