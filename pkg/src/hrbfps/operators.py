"""
Assembly of RBF-PS matrices.

A differential operator L is discretized as ``A_L A^{-1}`` where ``A`` is
the kernel interpolation matrix and ``A_L`` holds L applied to each
kernel column. The product is formed by one LU factorization of ``A`` and
a transposed solve; the inverse is never built.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConditioningError
from .geometry import NodeSet, chebyshev_nodes, distance_matrix
from .kernels import KernelSpec, _dphi_over_r, _second_from_offsets, cartesian_laplacian, evaluate

__all__ = [
    "CHEBYSHEV",
    "OPERATOR_TAGS",
    "AssembledOperator",
    "interpolation_matrix",
    "operator_matrix",
    "differentiation_matrix",
    "lu_factor_checked",
    "cheb_diff_matrix",
    "helmholtz_operator",
    "enforce_dirichlet",
    "solve_dirichlet",
    "save_matrix",
    "load_matrix",
]

#: Kernel tag for operators built from Chebyshev polynomials instead of RBFs.
CHEBYSHEV = "chebyshev"

OPERATOR_TAGS = ("interpolation", "d1", "d2", "laplacian", "helmholtz", "custom")


@dataclass(frozen=True, eq=False)
class AssembledOperator:
    """Dense square matrix plus what it discretizes."""

    matrix: np.ndarray
    operator_tag: str
    kernel: KernelSpec | str | None = None
    bc_enforced: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        if self.operator_tag not in OPERATOR_TAGS:
            raise ValueError(f"unknown operator tag {self.operator_tag!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def node_count(self):
        return self.matrix.shape[0]

    def __matmul__(self, other):
        return self.matrix @ other


def interpolation_matrix(spec: KernelSpec, nodes: NodeSet) -> AssembledOperator:
    """A[i, k] = phi(|x_i - x_k|)."""
    r = distance_matrix(nodes, nodes)
    return AssembledOperator(evaluate(spec, r), "interpolation", spec)


def operator_matrix(spec: KernelSpec, nodes: NodeSet, op: str, axis: int = 0) -> AssembledOperator:
    """
    Kernel columns hit by a differential operator.

    Parameters
    ----------
    op : {'d1', 'd2', 'laplacian'}
        First or second derivative along ``axis``, or the full Laplacian.
    axis : int
        Coordinate index for 'd1' and 'd2'.

    Returns
    -------
    AssembledOperator
        Entry (i, k) is ``L phi(|x - x_k|)`` evaluated at ``x = x_i``.
    """
    r = distance_matrix(nodes, nodes)
    if op == "laplacian":
        return AssembledOperator(cartesian_laplacian(spec, r, nodes.dim), op, spec)
    if op not in ("d1", "d2"):
        raise ValueError(f"unknown operator {op!r}; expected 'd1', 'd2' or 'laplacian'")
    if not 0 <= axis < nodes.dim:
        raise ValueError(f"axis {axis} out of range for {nodes.dim}-dimensional nodes")
    xk = nodes.points[:, axis]
    dk = xk[:, None] - xk[None, :]
    if op == "d1":
        m = _dphi_over_r(spec, r) * dk
    else:
        m = _second_from_offsets(spec, dk, r)
    return AssembledOperator(m, op, spec)


def lu_factor_checked(matrix, what="matrix"):
    """LU factorization that raises ConditioningError on an exactly zero pivot."""
    m = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ConditioningError(f"{what} has non-finite entries")
    with warnings.catch_warnings():
        # an exact zero pivot is reported below as ConditioningError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(m, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if np.any(pivots == 0.0):
        raise ConditioningError(
            f"{what} is singular (zero pivot at {int(np.argmin(pivots))})",
            condition=float("inf"),
        )
    return lu, piv


def _rcond_estimate(lu, anorm):
    rcond, _ = sla.lapack.dgecon(lu, anorm, norm="1")
    return float(rcond)


def differentiation_matrix(a: AssembledOperator, a_l: AssembledOperator) -> AssembledOperator:
    """D with D A = A_L, i.e. D = A_L A^{-1}, computed from one LU of A."""
    if a.node_count != a_l.node_count:
        raise ValueError("interpolation and operator matrices differ in size")
    lu = lu_factor_checked(a.matrix, "interpolation matrix")
    d = sla.lu_solve(lu, a_l.matrix.T, trans=1, check_finite=False).T
    if not np.all(np.isfinite(d)):
        anorm = np.linalg.norm(a.matrix, 1)
        rcond = _rcond_estimate(lu[0], anorm)
        cond = float("inf") if rcond == 0 else 1.0 / rcond
        raise ConditioningError("differentiation matrix overflowed", condition=cond)
    return AssembledOperator(d, a_l.operator_tag, a.kernel)


def cheb_diff_matrix(n: int, order: int = 1) -> AssembledOperator:
    """Chebyshev collocation derivative on :func:`chebyshev_nodes` (n).

    ``order=2`` returns the square of the first-order matrix.
    """
    x = chebyshev_nodes(n).points[:, 0]
    c = np.ones(n + 1)
    c[[0, -1]] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    # negative-sum trick for the diagonal
    d -= np.diag(d.sum(axis=1))
    if order == 1:
        return AssembledOperator(d, "d1", CHEBYSHEV)
    if order == 2:
        return AssembledOperator(d @ d, "d2", CHEBYSHEV)
    raise ValueError(f"order must be 1 or 2, got {order!r}")


def helmholtz_operator(d2: AssembledOperator | np.ndarray, k: float) -> AssembledOperator:
    """kron(D2, I) + kron(I, D2) + k^2 I on the tensor grid ordering."""
    m = d2.matrix if isinstance(d2, AssembledOperator) else np.asarray(d2, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("second-derivative matrix must be square")
    side = m.shape[0]
    eye = np.eye(side)
    h = np.kron(m, eye) + np.kron(eye, m)
    h[np.diag_indices_from(h)] += k * k
    kernel = d2.kernel if isinstance(d2, AssembledOperator) else None
    return AssembledOperator(h, "helmholtz" if k else "laplacian", kernel)


def enforce_dirichlet(opm: AssembledOperator, nodes: NodeSet, rhs, g):
    """
    Impose u = g at boundary nodes by row replacement.

    Parameters
    ----------
    g : callable or float
        Called as ``g(points)`` with the (n_boundary, dim) array of boundary
        points; a number means a constant boundary value.

    Returns
    -------
    (AssembledOperator, ndarray)
        Operator whose boundary rows are unit vectors, and the right-hand side
        with boundary entries replaced by g.
    """
    if opm.node_count != len(nodes):
        raise ValueError("operator size does not match the node count")
    rhs = np.array(rhs, dtype=float)
    if rhs.shape != (len(nodes),):
        raise ValueError("right-hand side length does not match the node count")
    idx = nodes.boundary_indices
    if idx.size == 0:
        raise ValueError("Dirichlet problem without boundary nodes")
    m = np.array(opm.matrix)
    m[idx, :] = 0.0
    m[idx, idx] = 1.0
    if callable(g):
        values = np.asarray(g(nodes.points[idx]), dtype=float)
    else:
        values = np.full(idx.size, float(g))
    rhs[idx] = values
    return AssembledOperator(m, opm.operator_tag, opm.kernel, bc_enforced=True), rhs


def solve_dirichlet(opm: AssembledOperator, rhs, boundary_mask):
    """
    Solve a Dirichlet-enforced system with boundary values reproduced exactly.

    The unit boundary rows fix u_B = rhs_B; the interior block is then solved
    with those values moved to the right-hand side. This is the same linear
    system, but a pivoted LU of the full matrix would return u_B only to
    roundoff.
    """
    if not opm.bc_enforced:
        raise ValueError("operator has no enforced boundary rows")
    b = np.asarray(boundary_mask, dtype=bool)
    inner = ~b
    m = opm.matrix
    u = np.array(rhs, dtype=float)
    if inner.any():
        lu = lu_factor_checked(m[np.ix_(inner, inner)], "system matrix")
        u[inner] = sla.lu_solve(lu, u[inner] - m[np.ix_(inner, b)] @ u[b], check_finite=False)
    return u


def save_matrix(path, op: AssembledOperator | np.ndarray):
    m = op.matrix if isinstance(op, AssembledOperator) else np.asarray(op)
    np.savetxt(path, m, fmt="%.17g")


def load_matrix(path) -> np.ndarray:
    return np.loadtxt(path, dtype=float, ndmin=2)
