"""
Benchmark PDEs on [-1, 1]^d and their RBF-PS / Chebyshev solves.

Each problem is built by a factory (``poisson1d``, ``helmholtz2d``,
``transport1d``, ``laplace2d``) and solved with :func:`solve`, which accepts
either a :class:`~hrbfps.kernels.KernelSpec` or the string ``"chebyshev"``
for the polynomial pseudospectral reference.

The order ``n`` is the Chebyshev order: a 1D problem has n + 1 nodes and a
2D problem (n + 1)^2.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .diagnostics import SpectrumSummary, condition_number, error_norms, stability_spectrum
from .geometry import NodeSet, chebyshev_nodes, tensor_grid_2d
from .kernels import KernelSpec
from .operators import (
    CHEBYSHEV,
    AssembledOperator,
    cheb_diff_matrix,
    differentiation_matrix,
    enforce_dirichlet,
    helmholtz_operator,
    interpolation_matrix,
    lu_factor_checked,
    operator_matrix,
    solve_dirichlet,
)

__all__ = [
    "PROBLEM_IDS",
    "DEFAULT_K",
    "PdeProblem",
    "SolveResult",
    "poisson1d",
    "poisson_exact",
    "helmholtz2d",
    "manufactured_exact",
    "manufactured_source",
    "transport1d",
    "default_pulse",
    "laplace2d",
    "laplace_boundary",
    "make_problem",
    "solve",
    "solve_poisson1d",
    "solve_helmholtz2d",
    "solve_transport1d",
    "solve_laplace2d",
    "save_solution_csv",
]

PROBLEM_IDS = ("poisson1d", "helmholtz2d_source", "helmholtz2d_exact", "transport1d", "laplace2d")

DEFAULT_K = 9.0


@dataclass(frozen=True, eq=False)
class PdeProblem:
    """
    A linear PDE with Dirichlet data on a Chebyshev node set.

    ``source``, ``boundary_g`` and ``exact`` take an (N, dim) array of points
    and return N values. Transport problems evaluate ``exact`` at the final
    time and keep the initial profile in ``coefficients['f0']``.
    """

    id: str
    n: int
    nodes: NodeSet
    source: Callable
    boundary_g: Callable | None
    exact: Callable | None = None
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in PROBLEM_IDS:
            raise ValueError(f"unknown problem id {self.id!r}")

    @property
    def is_tensor(self):
        return self.nodes.dim == 2

    def rhs(self):
        """Right-hand side with the boundary entries already replaced by g."""
        if self.id == "transport1d":
            return self.coefficients["f0"](self.nodes.points)
        f = np.asarray(self.source(self.nodes.points), dtype=float).copy()
        idx = self.nodes.boundary_indices
        f[idx] = self.boundary_g(self.nodes.points[idx])
        return f


@dataclass(eq=False)
class SolveResult:
    """
    Field at the nodes, its errors when an exact solution exists, and diagnostics.

    ``condition_numbers`` holds the 1D interpolation matrix ``A``, the kernel
    operator matrix (``A_xx`` or ``A_x``), the differentiation matrix (``D2``
    or ``L``) and the final ``system``. Chebyshev solves have no ``A`` entries.
    """

    solution: np.ndarray
    nodes: NodeSet
    exact_values: np.ndarray | None = None
    max_error: float | None = None
    rms_error: float | None = None
    condition_numbers: dict = field(default_factory=dict)
    spectrum: SpectrumSummary | None = None
    reference_deviation: float | None = None
    wall_time: float = 0.0


# -- exact solutions and data ------------------------------------------------

def _x(p):
    return np.asarray(p, dtype=float)[..., 0]


def _z(p):
    return np.asarray(p, dtype=float)[..., 1]


def poisson_exact(p):
    """u = (e^{4x} - x sinh 4 - cosh 4) / 16, solving u'' = e^{4x}, u(+-1) = 0."""
    x = _x(p)
    return (np.exp(4 * x) - x * np.sinh(4.0) - np.cosh(4.0)) / 16.0


def manufactured_exact(p):
    x, z = _x(p), _z(p)
    return 1.0 / (1.0 + x * x + z * z)


def manufactured_source(p, k):
    x, z = _x(p), _z(p)
    u = manufactured_exact(p)
    return 8.0 * (x * x + z * z) * u**3 - 4.0 * u**2 + k * k * u


def gaussian_bump(p):
    x, z = _x(p), _z(p)
    return np.exp(-10.0 * (x * x + z * z))


def default_pulse(p):
    """Initial transport profile exp(-20 (x + 0.5)^2)."""
    return np.exp(-20.0 * (_x(p) + 0.5) ** 2)


def laplace_boundary(p, literal=False):
    """
    Piecewise Dirichlet data for the Laplace problem.

    sin^4(pi x) on z = 1 for -1 < x < 0, sin(3 pi z) / 5 on x = 1, zero
    elsewhere. With ``literal=True`` the x = 1 edge uses sin(3 pi x) / 5,
    which vanishes identically there.
    """
    x, z = _x(p), _z(p)
    out = np.zeros_like(x)
    top = (z == 1.0) & (x > -1.0) & (x < 0.0)
    out[top] = np.sin(np.pi * x[top]) ** 4
    right = (x == 1.0) & ~top
    arg = x[right] if literal else z[right]
    out[right] = np.sin(3.0 * np.pi * arg) / 5.0
    return out


def _zero(p):
    return np.zeros(np.asarray(p).shape[0])


# -- factories -----------------------------------------------------------------

def _check_order(n, minimum=2):
    if int(n) != n or n < minimum:
        raise ValueError(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def poisson1d(n) -> PdeProblem:
    """u'' = e^{4x} on [-1, 1] with u(+-1) = 0."""
    n = _check_order(n)
    return PdeProblem(
        "poisson1d", n, chebyshev_nodes(n),
        source=lambda p: np.exp(4.0 * _x(p)),
        boundary_g=_zero,
        exact=poisson_exact,
    )


def helmholtz2d(n, k=DEFAULT_K, variant="gaussian_source") -> PdeProblem:
    """u_xx + u_zz + k^2 u = f on (-1, 1)^2.

    ``variant='gaussian_source'``: f = exp(-10 (x^2 + z^2)), u = 0 on the
    boundary, no exact solution. ``variant='manufactured'``: u = 1/(1 + x^2 + z^2)
    with the matching source and boundary data.
    """
    n = _check_order(n)
    nodes = tensor_grid_2d(n)
    k = float(k)
    if variant == "gaussian_source":
        return PdeProblem("helmholtz2d_source", n, nodes, gaussian_bump, _zero, None, {"k": k})
    if variant == "manufactured":
        return PdeProblem(
            "helmholtz2d_exact", n, nodes,
            source=lambda p: manufactured_source(p, k),
            boundary_g=manufactured_exact,
            exact=manufactured_exact,
            coefficients={"k": k},
        )
    raise ValueError(f"unknown Helmholtz variant {variant!r}")


def transport1d(n, c=1.0, dt=1e-3, t_final=1.0, f0=default_pulse) -> PdeProblem:
    """u_t + c u_x = 0 on [-1, 1], zero inflow data, u(x, 0) = f0(x)."""
    n = _check_order(n)
    if dt <= 0:
        raise ValueError("time step must be positive")
    steps = int(round(t_final / dt))
    if steps < 1 or abs(steps * dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError(f"t_final={t_final} is not a positive multiple of dt={dt}")
    c = float(c)
    nodes = chebyshev_nodes(n)
    # Dirichlet data only at the upwind end; c = 0 has no inflow boundary.
    mask = np.zeros(n + 1, dtype=bool)
    if c > 0:
        mask[-1] = True
    elif c < 0:
        mask[0] = True
    return PdeProblem(
        "transport1d", n, nodes.with_boundary(mask),
        source=_zero,
        boundary_g=_zero,
        exact=lambda p: f0(np.asarray(p) - c * t_final),
        coefficients={"c": c, "dt": float(dt), "t_final": float(t_final), "steps": steps, "f0": f0},
    )


def laplace2d(n, literal_bc=False) -> PdeProblem:
    """u_xx + u_zz = 0 on (-1, 1)^2 with piecewise boundary data."""
    n = _check_order(n)
    return PdeProblem(
        "laplace2d", n, tensor_grid_2d(n),
        source=_zero,
        boundary_g=lambda p: laplace_boundary(p, literal_bc),
        coefficients={"literal_bc": bool(literal_bc)},
    )


def make_problem(problem_id, n, *, k=DEFAULT_K, c=1.0, dt=1e-3, t_final=1.0, literal_bc=False):
    """Build a problem from its id and the scalar coefficients the CLI exposes."""
    if problem_id == "poisson1d":
        return poisson1d(n)
    if problem_id == "helmholtz2d_source":
        return helmholtz2d(n, k, "gaussian_source")
    if problem_id == "helmholtz2d_exact":
        return helmholtz2d(n, k, "manufactured")
    if problem_id == "transport1d":
        return transport1d(n, c, dt, t_final)
    if problem_id == "laplace2d":
        return laplace2d(n, literal_bc)
    raise ValueError(f"unknown problem id {problem_id!r}")


# -- solvers ---------------------------------------------------------------------

def _derivative_1d(n, kernel, order):
    """(A, A_L, D) on chebyshev_nodes(n); A and A_L are None for Chebyshev."""
    if kernel == CHEBYSHEV:
        return None, None, cheb_diff_matrix(n, order)
    if not isinstance(kernel, KernelSpec):
        raise TypeError(f"kernel must be a KernelSpec or {CHEBYSHEV!r}, got {kernel!r}")
    nodes = chebyshev_nodes(n)
    a = interpolation_matrix(kernel, nodes)
    a_l = operator_matrix(kernel, nodes, "d1" if order == 1 else "d2")
    return a, a_l, differentiation_matrix(a, a_l)


def _elliptic(problem, kernel, k, spectrum, diagnostics):
    a, a_xx, d2 = _derivative_1d(problem.n, kernel, 2)
    if problem.is_tensor:
        op = helmholtz_operator(d2, k)
    else:
        op = d2
    system, rhs = enforce_dirichlet(op, problem.nodes, problem.source(problem.nodes.points),
                                    problem.boundary_g)
    u = solve_dirichlet(system, rhs, problem.nodes.boundary_mask)
    conds, spec_summary = {}, None
    if diagnostics:
        if a is not None:
            conds["A"] = condition_number(a.matrix)
            conds["A_xx"] = condition_number(a_xx.matrix)
        conds["D2"] = condition_number(d2.matrix)
        conds["system"] = condition_number(system.matrix)
    if spectrum:
        spec_summary = stability_spectrum(system, problem.nodes.boundary_mask, shift=k * k)
    return u, conds, spec_summary


def _transport(problem, kernel, spectrum, diagnostics):
    co = problem.coefficients
    a, a_x, d = _derivative_1d(problem.n, kernel, 1)
    m = np.eye(problem.nodes.points.shape[0]) + co["dt"] * co["c"] * d.matrix
    system = AssembledOperator(m, "custom", d.kernel)
    inflow = problem.nodes.boundary_indices
    if inflow.size:
        system, _ = enforce_dirichlet(system, problem.nodes, np.zeros(len(problem.nodes)), 0.0)
    # boundary unknowns are eliminated so the inflow value stays exact
    inner = ~problem.nodes.boundary_mask
    m_ii = system.matrix[np.ix_(inner, inner)]
    lu = lu_factor_checked(m_ii, "time-stepping matrix")
    u = co["f0"](problem.nodes.points).astype(float)
    if inflow.size:
        g = np.asarray(problem.boundary_g(problem.nodes.points[inflow]), dtype=float)
        lift = system.matrix[np.ix_(inner, inflow)] @ g
        if co["steps"]:
            u[inflow] = g
    else:
        lift = 0.0
    for _ in range(co["steps"]):
        u[inner] = sla.lu_solve(lu, u[inner] - lift, check_finite=False)
    conds, spec_summary = {}, None
    if diagnostics:
        if a is not None:
            conds["A"] = condition_number(a.matrix)
            conds["A_x"] = condition_number(a_x.matrix)
        conds["L"] = condition_number(d.matrix)
        conds["system"] = condition_number(system.matrix)
    if spectrum:
        # semi-discrete operator -c D with the inflow row removed
        minus_cd = -co["c"] * np.asarray(d.matrix)
        spec_summary = stability_spectrum(minus_cd, problem.nodes.boundary_mask)
    return u, conds, spec_summary


def solve(problem: PdeProblem, kernel, *, spectrum=False, diagnostics=True,
          compare_reference=None) -> SolveResult:
    """
    Assemble, enforce boundary data and solve.

    Parameters
    ----------
    kernel : KernelSpec or 'chebyshev'
        RBF kernel, or the Chebyshev polynomial reference.
    spectrum : bool
        Also compute the stability spectrum of the discrete operator.
    diagnostics : bool
        Compute condition numbers (skipped inside optimization loops).
    compare_reference : bool, optional
        Also solve with Chebyshev and store the max deviation. Defaults to
        True for problems without exact solution when ``diagnostics`` is set.

    ``wall_time`` covers assembly and solve only.
    """
    t0 = time.perf_counter()
    if problem.id == "transport1d":
        u, conds, summary = _transport(problem, kernel, spectrum, diagnostics)
        k = None
    else:
        k = problem.coefficients.get("k", 0.0)
        u, conds, summary = _elliptic(problem, kernel, k, spectrum, diagnostics)
    wall = time.perf_counter() - t0

    result = SolveResult(u, problem.nodes, condition_numbers=conds, spectrum=summary, wall_time=wall)
    if problem.exact is not None:
        result.exact_values = np.asarray(problem.exact(problem.nodes.points), dtype=float)
        result.max_error, result.rms_error = error_norms(u, result.exact_values)
    if compare_reference is None:
        compare_reference = diagnostics and problem.exact is None
    if compare_reference and kernel != CHEBYSHEV:
        ref = solve(problem, CHEBYSHEV, diagnostics=False, compare_reference=False)
        result.reference_deviation = float(np.max(np.abs(u - ref.solution)))
    return result


def solve_poisson1d(n, spec, **kw) -> SolveResult:
    return solve(poisson1d(n), spec, **kw)


def solve_helmholtz2d(n, spec, k=DEFAULT_K, variant="gaussian_source", **kw) -> SolveResult:
    return solve(helmholtz2d(n, k, variant), spec, **kw)


def solve_transport1d(n, spec, c=1.0, dt=1e-3, t_final=1.0, f0=default_pulse, **kw) -> SolveResult:
    return solve(transport1d(n, c, dt, t_final, f0), spec, **kw)


def solve_laplace2d(n, spec, literal_bc=False, **kw) -> SolveResult:
    return solve(laplace2d(n, literal_bc), spec, **kw)


def save_solution_csv(path, result: SolveResult):
    """Columns x, [z,] u, [exact, abs_error]."""
    pts = result.nodes.points
    header = ["x", "z"][: pts.shape[1]] + ["u"]
    cols = [pts[:, i] for i in range(pts.shape[1])] + [result.solution]
    if result.exact_values is not None:
        header += ["exact", "abs_error"]
        cols += [result.exact_values, np.abs(result.solution - result.exact_values)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([repr(float(v)) for v in row])
