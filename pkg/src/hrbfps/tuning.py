"""
Kernel parameter selection.

Two objectives drive the search over (epsilon, alpha, beta):

* ``rms``   - RMS error of the solve against a known exact solution;
* ``loocv`` - leave-one-out cross-validation cost of interpolating the
              problem's right-hand side with the kernel, via Rippa's rule
              e_k = c_k / (A^{-1})_kk or by brute force.

The search itself is a global-best particle swarm. Reproducibility
contract: one ``numpy.random.Generator`` seeded from ``PsoConfig.seed``
draws the initial positions (particle-major, coordinate-minor), then per
generation one block of shape (swarm, 3, 2) holding R1 and R2 for every
particle and coordinate, in that order.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .errors import ConditioningError, OptimizationError
from .geometry import chebyshev_nodes
from .kernels import KernelSpec
from .operators import AssembledOperator, interpolation_matrix, lu_factor_checked
from .problems import PdeProblem, solve

__all__ = [
    "DEFAULT_BOUNDS",
    "PsoConfig",
    "SwarmState",
    "PsoResult",
    "loocv_cost",
    "problem_loocv",
    "rms_objective",
    "init_swarm",
    "pso_step",
    "particle_swarm",
    "optimize",
    "save_history_csv",
]

log = logging.getLogger(__name__)

DEFAULT_BOUNDS = ((0.01, 10.0), (0.0, 1.0), (0.0, 1.0))


@dataclass(frozen=True)
class PsoConfig:
    """
    Swarm settings.

    ``inertia`` multiplies the previous velocity. The update in its bare form
    has inertia 1, which keeps the swarm oscillating; the default 0.5 lies
    inside the stability region (c1 + c2)/2 - 1 < w < 1 that accompanies the
    0 < c1 + c2 < 4 rule.
    """

    swarm_size: int = 30
    generations: int = 40
    c1: float = 1.2
    c2: float = 1.7
    inertia: float = 0.5
    bounds: tuple = DEFAULT_BOUNDS
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 1 or self.generations < 1:
            raise ValueError("swarm_size and generations must be positive")
        if not 0.0 < self.c1 + self.c2 < 4.0:
            raise ValueError(f"c1 + c2 must lie in (0, 4), got {self.c1 + self.c2}")
        b = np.asarray(self.bounds, dtype=float)
        if b.shape != (3, 2) or np.any(b[:, 0] > b[:, 1]):
            raise ValueError("bounds must be three (low, high) pairs with low <= high")
        if b[0, 0] < 0:
            raise ValueError("epsilon lower bound must be >= 0")
        if np.any(b[1:, 0] < 0) or np.any(b[1:, 1] > 1):
            raise ValueError("alpha and beta bounds must lie within [0, 1]")
        object.__setattr__(self, "bounds", tuple(map(tuple, b.tolist())))

    @property
    def lower(self):
        return np.array([lo for lo, _ in self.bounds])

    @property
    def upper(self):
        return np.array([hi for _, hi in self.bounds])


@dataclass(eq=False)
class SwarmState:
    positions: np.ndarray
    velocities: np.ndarray
    best_positions: np.ndarray
    best_fitness: np.ndarray
    global_position: np.ndarray
    global_fitness: float
    generation: int = 0


@dataclass(eq=False)
class PsoResult:
    position: np.ndarray
    fitness: float
    history: list = field(default_factory=list)  # (generation, fitness, eps, alpha, beta)
    state: SwarmState | None = None


# -- objectives --------------------------------------------------------------------

def _refined_solve(m, lu, b, steps=2):
    """
    LU solve followed by iterative refinement with residuals in long double.

    Where long double carries extra bits (x86) the forward error drops from
    about cond(A) * eps to about eps, which both LOOCV routes need to agree
    for conditions up to 1e10.
    """
    x = sla.lu_solve(lu, b, check_finite=False)
    mh = np.asarray(m, dtype=np.longdouble)
    bh = np.asarray(b, dtype=np.longdouble)
    for _ in range(steps):
        r = (bh - mh @ x.astype(np.longdouble)).astype(float)
        x = x + sla.lu_solve(lu, r, check_finite=False)
    return x


def loocv_cost(a: AssembledOperator | np.ndarray, data, mode: str = "rippa") -> float:
    """
    Leave-one-out cost ||e||_2 of interpolating ``data`` with matrix ``a``.

    ``data`` may be a vector or a 2D array whose columns are independent data
    sets sharing the nodes; the cost is then the norm over all of them.
    """
    m = a.matrix if isinstance(a, AssembledOperator) else np.asarray(a, dtype=float)
    y = np.asarray(data, dtype=float)
    if y.shape[0] != m.shape[0]:
        raise ValueError(f"data length {y.shape[0]} does not match matrix side {m.shape[0]}")
    if mode == "rippa":
        lu = lu_factor_checked(m, "interpolation matrix")
        c = _refined_solve(m, lu, y)
        inv_diag = np.diag(_refined_solve(m, lu, np.eye(m.shape[0])))
        zero = np.flatnonzero(inv_diag == 0.0)
        if zero.size:
            raise ConditioningError(
                f"inverse interpolation matrix has a zero diagonal entry at {zero[0]}",
                index=int(zero[0]),
            )
        e = c / (inv_diag[:, None] if y.ndim == 2 else inv_diag)
        return float(np.linalg.norm(e))
    if mode == "bruteforce":
        n = m.shape[0]
        e = np.empty_like(y)
        for k in range(n):
            keep = np.arange(n) != k
            sub = m[np.ix_(keep, keep)]
            try:
                lu = lu_factor_checked(sub, f"leave-one-out system {k}")
            except ConditioningError as exc:
                raise ConditioningError(str(exc), exc.condition, index=k) from exc
            ck = _refined_solve(sub, lu, y[keep])
            pred = np.asarray(m[k, keep], dtype=np.longdouble) @ ck.astype(np.longdouble)
            e[k] = (pred - y[k]).astype(float)
        return float(np.linalg.norm(e))
    raise ValueError(f"unknown LOOCV mode {mode!r}")


def problem_loocv(problem: PdeProblem, spec: KernelSpec, mode: str = "rippa") -> float:
    """
    LOOCV cost of a PDE problem: the kernel interpolates the right-hand side.

    On tensor grids the 1D interpolation matrix that builds D2 is used, with
    every grid line (in both directions) as a data column.
    """
    rhs = problem.rhs()
    if problem.is_tensor:
        side = problem.n + 1
        grid = rhs.reshape(side, side)
        a = interpolation_matrix(spec, chebyshev_nodes(problem.n))
        return loocv_cost(a, np.hstack([grid, grid.T]), mode)
    return loocv_cost(interpolation_matrix(spec, problem.nodes), rhs, mode)


def rms_objective(problem: PdeProblem, spec: KernelSpec) -> float:
    """RMS error of the solve; ``inf`` when the assembly or solve breaks down."""
    if problem.exact is None:
        raise ValueError(f"{problem.id} has no exact solution; use the LOOCV objective")
    try:
        res = solve(problem, spec, diagnostics=False, compare_reference=False)
    except ConditioningError:
        return math.inf
    return res.rms_error if np.isfinite(res.rms_error) else math.inf


# -- swarm -------------------------------------------------------------------------

def _evaluate(fitness, positions):
    out = np.empty(len(positions))
    for i, p in enumerate(positions):
        try:
            v = float(fitness(p))
        except (ConditioningError, ValueError, FloatingPointError):
            v = math.inf
        out[i] = math.inf if math.isnan(v) else v
    return out


def init_swarm(cfg: PsoConfig, fitness: Callable, rng: np.random.Generator) -> SwarmState:
    """Uniform positions inside the bounds, zero velocities, generation 0."""
    lo, hi = cfg.lower, cfg.upper
    pos = lo + (hi - lo) * rng.random((cfg.swarm_size, 3))
    fit = _evaluate(fitness, pos)
    best = int(np.argmin(fit))
    return SwarmState(
        positions=pos,
        velocities=np.zeros_like(pos),
        best_positions=pos.copy(),
        best_fitness=fit.copy(),
        global_position=pos[best].copy(),
        global_fitness=float(fit[best]),
    )


def pso_step(state: SwarmState, cfg: PsoConfig, fitness: Callable, rng) -> SwarmState:
    """
    One generation: velocity and position update, bound clipping, re-evaluation.

    A coordinate pushed outside its interval is clipped to the bound and its
    velocity component is zeroed. ``rng`` only needs a ``random(shape)``
    method, so tests can inject fixed draws.
    """
    x = state.positions
    r = np.asarray(rng.random((len(x), 3, 2)), dtype=float)
    v = (
        cfg.inertia * state.velocities
        + cfg.c1 * (state.best_positions - x) * r[..., 0]
        + cfg.c2 * (state.global_position - x) * r[..., 1]
    )
    x = x + v
    lo, hi = cfg.lower, cfg.upper
    outside = (x < lo) | (x > hi)
    x = np.clip(x, lo, hi)
    v = np.where(outside, 0.0, v)

    fit = _evaluate(fitness, x)
    improved = fit < state.best_fitness
    pbest = np.where(improved[:, None], x, state.best_positions)
    pfit = np.where(improved, fit, state.best_fitness)
    gpos, gfit = state.global_position, state.global_fitness
    best = int(np.argmin(pfit))
    if pfit[best] < gfit:
        gpos, gfit = pbest[best].copy(), float(pfit[best])
    return SwarmState(x, v, pbest, pfit, gpos, gfit, state.generation + 1)


def particle_swarm(fitness: Callable, cfg: PsoConfig = PsoConfig()) -> PsoResult:
    """Minimize ``fitness(position)`` over the box in ``cfg``."""
    rng = np.random.default_rng(cfg.seed)
    state = init_swarm(cfg, fitness, rng)
    if not np.isfinite(state.global_fitness):
        raise OptimizationError("every particle of the initial swarm has infinite fitness")
    history = [(0, state.global_fitness, *state.global_position)]
    for _ in range(cfg.generations):
        state = pso_step(state, cfg, fitness, rng)
        history.append((state.generation, state.global_fitness, *state.global_position))
        log.debug("generation %d: best %.6g at %s", state.generation, state.global_fitness,
                  state.global_position)
    return PsoResult(state.global_position.copy(), state.global_fitness, history, state)


def _spec_from(position):
    eps, alpha, beta = (float(v) for v in position)
    return KernelSpec.hybrid(eps, alpha, beta)


def optimize(problem: PdeProblem, cfg: PsoConfig = PsoConfig(), criterion: str = "rms"):
    """
    Tune a hybrid kernel for ``problem``.

    Returns
    -------
    (KernelSpec, float, list)
        Best kernel, its fitness, and the per-generation best
        ``(generation, fitness, eps, alpha, beta)`` records.
    """
    if criterion == "rms":
        if problem.exact is None:
            raise ValueError(f"{problem.id} has no exact solution; use criterion='loocv'")

        def fitness(p):
            return rms_objective(problem, _spec_from(p))
    elif criterion == "loocv":
        def fitness(p):
            return problem_loocv(problem, _spec_from(p))
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    res = particle_swarm(fitness, cfg)
    return _spec_from(res.position), res.fitness, res.history


def save_history_csv(path, history):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["generation", "best_fitness", "epsilon", "alpha", "beta"])
        for g, f, e, a, b in history:
            w.writerow([g, repr(float(f)), repr(float(e)), repr(float(a)), repr(float(b))])


def with_seed(cfg: PsoConfig, seed: int) -> PsoConfig:
    return replace(cfg, seed=seed)
