"""Hybrid Gaussian-cubic radial basis pseudospectral (RBF-PS) solvers."""

from .errors import ConditioningError, DiagnosticError, OptimizationError
from .geometry import NodeSet, chebyshev_nodes, distance_matrix, tensor_grid_2d
from .kernels import KernelSpec
from .operators import (
    CHEBYSHEV,
    AssembledOperator,
    cheb_diff_matrix,
    differentiation_matrix,
    enforce_dirichlet,
    helmholtz_operator,
    interpolation_matrix,
    operator_matrix,
)
from .diagnostics import condition_number, error_norms, spectrum, stability_spectrum
from .problems import PdeProblem, SolveResult, make_problem, solve
from .tuning import PsoConfig, loocv_cost, optimize, particle_swarm

__version__ = "0.1.0"
