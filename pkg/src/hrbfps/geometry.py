"""
Collocation node sets on [-1, 1]^d.

Node ordering is part of the contract. Chebyshev points run from +1 down
to -1, and the 2D tensor grid is row-major in (x, z) with x varying
slowest, so that ``kron(D2, I)`` differentiates in x and ``kron(I, D2)``
in z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

__all__ = [
    "NodeSet",
    "chebyshev_nodes",
    "tensor_grid_2d",
    "distance_matrix",
    "save_nodes",
    "load_nodes",
]


@dataclass(frozen=True, eq=False)
class NodeSet:
    """
    Ordered collocation points with a boundary flag per point.

    Parameters
    ----------
    points : array_like, shape (N, dim) or (N,)
        Node coordinates. A flat array is read as 1D points.
    boundary_mask : array_like of bool, shape (N,), optional
        True for nodes on the domain boundary. Defaults to all False.
    """

    points: np.ndarray
    boundary_mask: np.ndarray = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a nonempty (N, dim) array")
        if self.boundary_mask is None:
            mask = np.zeros(len(pts), dtype=bool)
        else:
            mask = np.array(self.boundary_mask, dtype=bool).ravel()
        if mask.shape != (len(pts),):
            raise ValueError("boundary_mask length must match the number of points")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("node set contains coincident points")
        pts.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "boundary_mask", mask)

    def __len__(self):
        return self.points.shape[0]

    def __eq__(self, other):
        if not isinstance(other, NodeSet):
            return NotImplemented
        return np.array_equal(self.points, other.points) and np.array_equal(
            self.boundary_mask, other.boundary_mask
        )

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def boundary_indices(self):
        return np.flatnonzero(self.boundary_mask)

    @property
    def interior_indices(self):
        return np.flatnonzero(~self.boundary_mask)

    def with_boundary(self, mask):
        """Same points, different boundary classification."""
        return NodeSet(self.points, mask)


def chebyshev_nodes(n: int) -> NodeSet:
    """Chebyshev extreme points cos(j pi / n), j = 0..n, endpoints on the boundary."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    x = np.cos(np.pi * np.arange(n + 1) / n)
    # cos(pi/2) etc. are not exactly symmetric in floating point.
    x = 0.5 * (x - x[::-1])
    mask = np.zeros(n + 1, dtype=bool)
    mask[[0, -1]] = True
    return NodeSet(x, mask)


def tensor_grid_2d(n: int) -> NodeSet:
    """(n+1)^2 tensor product of Chebyshev points; index i*(n+1)+j holds (x_i, z_j)."""
    x = chebyshev_nodes(n).points[:, 0]
    X, Z = np.meshgrid(x, x, indexing="ij")
    pts = np.column_stack([X.ravel(), Z.ravel()])
    mask = (np.abs(pts[:, 0]) == 1.0) | (np.abs(pts[:, 1]) == 1.0)
    return NodeSet(pts, mask)


def distance_matrix(a: NodeSet, b: NodeSet) -> np.ndarray:
    """Euclidean distances, entry (i, k) = |a_i - b_k|."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a is b:
        d = cdist(a.points, a.points)
        # cdist is symmetric up to rounding; make it exact.
        d = np.triu(d, 1)
        return d + d.T
    return cdist(a.points, b.points)


def save_nodes(path, nodes: NodeSet):
    """Write one point per line followed by a 0/1 boundary flag."""
    data = np.column_stack([nodes.points, nodes.boundary_mask.astype(float)])
    fmt = ["%.17g"] * nodes.dim + ["%d"]
    np.savetxt(path, data, fmt=fmt)


def load_nodes(path, dim: int) -> NodeSet:
    """Read a node file written by :func:`save_nodes` or a bare coordinate list.

    ``dim`` disambiguates the optional trailing flag column.
    """
    data = np.loadtxt(path, dtype=float, ndmin=2)
    if data.shape[1] == dim:
        return NodeSet(data)
    if data.shape[1] == dim + 1:
        flags = data[:, -1]
        if not np.all((flags == 0) | (flags == 1)):
            raise ValueError("boundary flag column must contain only 0 and 1")
        return NodeSet(data[:, :dim], flags.astype(bool))
    raise ValueError(f"expected {dim} or {dim + 1} columns, found {data.shape[1]}")
