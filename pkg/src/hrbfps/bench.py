"""
Experiment runner: optional PSO tuning, solve, diagnostics, report.

Reports are flat records written one row per run to CSV (or a JSON list).
The column set is fixed; ``format_version`` changes whenever it does.
Empty cells mean "not applicable"; infinite values are written as ``inf``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import tempfile
import time
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .diagnostics import save_spectrum_csv
from .errors import ConditioningError, DiagnosticError, OptimizationError
from .kernels import FAMILIES, KernelSpec
from .problems import DEFAULT_K, PROBLEM_IDS, make_problem, save_solution_csv, solve
from .tuning import PsoConfig, optimize, save_history_csv

__all__ = [
    "FORMAT_VERSION",
    "UsageError",
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "run_sweep",
    "write_reports",
    "read_reports",
    "reports_to_text",
    "loglog_slope",
]

log = logging.getLogger(__name__)

FORMAT_VERSION = 1

DEFAULT_NODES = {
    "poisson1d": 25,
    "helmholtz2d_source": 25,
    "helmholtz2d_exact": 17,
    "transport1d": 65,
    "laplace2d": 25,
}


class UsageError(ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One experiment.

    ``n`` counts nodes per dimension (N for a 1D problem, N x N grid in 2D),
    the way the benchmark tables are indexed. ``None`` picks a per-problem
    default.
    """

    problem: str = "poisson1d"
    n: int | None = None
    kernel: str = "hybrid"
    epsilon: float = 1.0
    alpha: float = 0.8
    beta: float = 0.1
    k: float = DEFAULT_K
    c: float = 1.0
    dt: float = 1e-3
    t_final: float = 1.0
    literal_bc: bool = False
    optimize: str = "none"
    swarm: int = 30
    generations: int = 40
    seed: int = 0
    spectrum: bool = False
    timing: bool = True
    out: str | None = None
    format: str = "csv"
    history_out: str | None = None
    solution_out: str | None = None
    spectrum_out: str | None = None

    def validated(self) -> "ExperimentConfig":
        problem = str(self.problem).replace("-", "_")
        if problem not in PROBLEM_IDS:
            raise UsageError("problem", f"unknown problem {self.problem!r}")
        n = DEFAULT_NODES[problem] if self.n is None else self.n
        try:
            n = int(n)
        except (TypeError, ValueError):
            raise UsageError("n", f"not an integer: {self.n!r}") from None
        if n < 3:
            raise UsageError("n", "need at least 3 nodes per dimension")
        if self.kernel not in FAMILIES:
            raise UsageError("kernel", f"expected one of {FAMILIES}, got {self.kernel!r}")
        if self.optimize not in ("none", "rms", "loocv"):
            raise UsageError("optimize", f"expected none, rms or loocv, got {self.optimize!r}")
        if self.optimize == "rms" and problem in ("helmholtz2d_source", "laplace2d"):
            raise UsageError("optimize", f"{problem} has no exact solution; use loocv")
        if self.format not in ("csv", "json"):
            raise UsageError("format", f"expected csv or json, got {self.format!r}")
        if self.dt <= 0:
            raise UsageError("dt", "must be positive")
        if self.swarm < 1:
            raise UsageError("swarm", "must be positive")
        if self.generations < 1:
            raise UsageError("generations", "must be positive")
        if self.optimize == "none":
            try:
                self.kernel_spec()
            except ValueError as exc:
                raise UsageError("kernel", str(exc)) from None
        return replace(self, problem=problem, n=n)

    def kernel_spec(self) -> KernelSpec:
        if self.kernel == "gaussian":
            return KernelSpec.gaussian(self.epsilon)
        if self.kernel == "cubic":
            return KernelSpec.cubic()
        return KernelSpec.hybrid(self.epsilon, self.alpha, self.beta)

    def pso_config(self) -> PsoConfig:
        return PsoConfig(swarm_size=self.swarm, generations=self.generations, seed=self.seed)


@dataclass
class ExperimentReport:
    problem: str
    n: int
    node_count: int
    kernel: str
    epsilon: float
    alpha: float
    beta: float
    criterion: str
    status: str = "ok"
    message: str = ""
    fitness: float | None = None
    max_error: float | None = None
    rms_error: float | None = None
    reference_deviation: float | None = None
    cond_A: float | None = None
    cond_A_L: float | None = None
    cond_L: float | None = None
    cond_system: float | None = None
    cond_estimated: bool = False
    positive_real_count: int | None = None
    max_real_part: float | None = None
    swarm: int | None = None
    generations: int | None = None
    seed: int | None = None
    wall_time: float | None = None
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        # one line per run: control characters in messages become spaces
        self.message = "".join(" " if ch.isspace() or not ch.isprintable() else ch
                               for ch in str(self.message))


_FIELD_TYPES = {
    "problem": str, "n": int, "node_count": int, "kernel": str, "epsilon": float,
    "alpha": float, "beta": float, "criterion": str, "status": str, "message": str,
    "fitness": float, "max_error": float, "rms_error": float, "reference_deviation": float,
    "cond_A": float, "cond_A_L": float, "cond_L": float, "cond_system": float, "cond_estimated": bool,
    "positive_real_count": int, "max_real_part": float, "swarm": int, "generations": int,
    "seed": int, "wall_time": float, "format_version": int,
}
COLUMNS = [f.name for f in fields(ExperimentReport)]


def _finite_or_inf(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        # never let a NaN into a report
        return math.inf
    return x


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run one experiment and, if ``config.out`` is set, write its report."""
    cfg = config.validated()
    report = _run(cfg)
    if cfg.out:
        write_reports(cfg.out, [report], cfg.format)
    return report


def _run(cfg: ExperimentConfig) -> ExperimentReport:
    problem = make_problem(cfg.problem, cfg.n - 1, k=cfg.k, c=cfg.c, dt=cfg.dt,
                           t_final=cfg.t_final, literal_bc=cfg.literal_bc)
    tuned = cfg.optimize != "none"
    spec = None if tuned else cfg.kernel_spec()
    report = ExperimentReport(
        problem=cfg.problem,
        n=cfg.n,
        node_count=len(problem.nodes),
        kernel="hybrid" if tuned else cfg.kernel,
        epsilon=spec.epsilon if spec else math.nan,
        alpha=spec.alpha if spec else math.nan,
        beta=spec.beta if spec else math.nan,
        criterion=cfg.optimize,
    )
    if tuned:
        report.swarm, report.generations, report.seed = cfg.swarm, cfg.generations, cfg.seed
    t0 = time.perf_counter()
    try:
        if tuned:
            spec, fitness, history = optimize(problem, cfg.pso_config(), cfg.optimize)
            report.epsilon, report.alpha, report.beta = spec.params
            report.fitness = _finite_or_inf(fitness)
            if cfg.history_out:
                _atomic(cfg.history_out, lambda p: save_history_csv(p, history))
        pso_time = time.perf_counter() - t0
        result = solve(problem, spec, spectrum=cfg.spectrum)
    except (ConditioningError, OptimizationError, DiagnosticError, np.linalg.LinAlgError) as exc:
        log.warning("%s n=%d failed: %s", cfg.problem, cfg.n, exc)
        report.status = "failed"
        report.message = f"{type(exc).__name__}: {exc}"
        for name in ("epsilon", "alpha", "beta"):
            if math.isnan(getattr(report, name)):
                setattr(report, name, math.inf)
        return report

    report.max_error = _finite_or_inf(result.max_error)
    report.rms_error = _finite_or_inf(result.rms_error)
    report.reference_deviation = _finite_or_inf(result.reference_deviation)
    conds = result.condition_numbers
    report.cond_A = _finite_or_inf(conds.get("A"))
    report.cond_A_L = _finite_or_inf(conds.get("A_xx", conds.get("A_x")))
    report.cond_L = _finite_or_inf(conds.get("D2", conds.get("L")))
    report.cond_system = _finite_or_inf(conds.get("system"))
    report.cond_estimated = any(getattr(v, "estimate", False) for v in conds.values())
    if result.spectrum is not None:
        report.positive_real_count = result.spectrum.positive_real_count
        report.max_real_part = _finite_or_inf(result.spectrum.max_real_part)
        if cfg.spectrum_out:
            _atomic(cfg.spectrum_out, lambda p: save_spectrum_csv(p, result.spectrum))
    if cfg.solution_out:
        _atomic(cfg.solution_out, lambda p: save_solution_csv(p, result))
    if cfg.timing:
        report.wall_time = pso_time + result.wall_time
    return report


def run_sweep(config: ExperimentConfig, axis: str, values) -> list[ExperimentReport]:
    """
    One experiment per value of ``axis`` ('nodes' or 'epsilon').

    Point i runs with seed ``config.seed + i``. Failed points are kept as
    failed reports. The combined table goes to ``config.out`` if set.
    """
    values = list(values)
    if not values:
        raise UsageError("values", "sweep needs at least one value")
    if axis not in ("nodes", "epsilon"):
        raise UsageError("axis", f"expected nodes or epsilon, got {axis!r}")
    base = replace(config, out=None)
    reports = []
    for i, v in enumerate(values):
        key = "n" if axis == "nodes" else "epsilon"
        point = replace(base, **{key: v}, seed=config.seed + i)
        reports.append(_run(point.validated()))
    if config.out:
        write_reports(config.out, reports, config.format)
    return reports


# -- serialization -------------------------------------------------------------

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse(name, text):
    if text == "":
        return "" if _FIELD_TYPES[name] is str else None
    t = _FIELD_TYPES[name]
    if t is bool:
        return text == "true"
    return t(text)


def reports_to_text(reports, fmt="csv") -> str:
    if fmt == "json":
        rows = []
        for r in reports:
            d = asdict(r)
            rows.append({k: (_cell(v) if isinstance(v, float) and not math.isfinite(v) else v)
                         for k, v in d.items()})
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in reports:
        w.writerow([_cell(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def parse_reports(text, fmt="csv") -> list[ExperimentReport]:
    if fmt == "json":
        out = []
        for d in json.loads(text):
            kw = {}
            for k, v in d.items():
                if isinstance(v, str) and _FIELD_TYPES[k] is float:
                    v = float(v)
                kw[k] = v
            out.append(ExperimentReport(**kw))
        return out
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    if header != COLUMNS:
        raise ValueError("unrecognized report header")
    return [ExperimentReport(**{k: _parse(k, v) for k, v in zip(header, row)}) for row in body]


def _atomic(path, writer):
    # write next to the target, then rename: no partial files on failure
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_reports(path, reports, fmt="csv"):
    text = reports_to_text(reports, fmt)

    def writer(p):
        with open(p, "w", newline="") as fh:
            fh.write(text)

    _atomic(path, writer)


def read_reports(path, fmt=None) -> list[ExperimentReport]:
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "csv"
    with open(path, newline="") as fh:
        return parse_reports(fh.read(), fmt)


def loglog_slope(sizes, times) -> float:
    """Least-squares slope of log(times) against log(sizes)."""
    x, y = np.log(np.asarray(sizes, float)), np.log(np.asarray(times, float))
    return float(np.polyfit(x, y, 1)[0])
