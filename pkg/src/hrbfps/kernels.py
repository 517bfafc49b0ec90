"""
Radial kernels: Gaussian, cubic and their hybrid.

The hybrid kernel is

    phi(r) = alpha * exp(-(eps r)^2) + beta * r^3

with the Gaussian and the cubic obtained as the corner cases
``(alpha, beta) = (1, 0)`` and ``(0, 1)``. Every function here accepts
NumPy arrays and broadcasts, so matrix assembly is a single call.

All quotients of the form phi'(r)/r are expanded in closed form before
evaluation, which keeps the node-coincident entries (r = 0) exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FAMILIES",
    "KernelSpec",
    "evaluate",
    "radial_derivative",
    "cartesian_first_derivative",
    "cartesian_second_derivative",
    "cartesian_laplacian",
]

FAMILIES = ("gaussian", "cubic", "hybrid")

_DEFAULT_WEIGHTS = {"gaussian": (1.0, 0.0), "cubic": (0.0, 1.0)}


@dataclass(frozen=True)
class KernelSpec:
    """
    Kernel family and parameters.

    Parameters
    ----------
    family : {'gaussian', 'cubic', 'hybrid'}
        Kernel family.
    epsilon : float, default 1.0
        Shape parameter of the Gaussian term (inverse length). Ignored by
        the cubic kernel.
    alpha, beta : float, optional
        Weights of the Gaussian and cubic terms, both in [0, 1]. Fixed to
        (1, 0) for 'gaussian' and (0, 1) for 'cubic'; passing anything else
        for those families is an error.
    """

    family: str
    epsilon: float = 1.0
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        eps = float(self.epsilon)
        if not np.isfinite(eps) or eps < 0:
            raise ValueError(f"epsilon must be a finite nonnegative number, got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", eps)

        if self.family in _DEFAULT_WEIGHTS:
            a0, b0 = _DEFAULT_WEIGHTS[self.family]
            a = a0 if self.alpha is None else float(self.alpha)
            b = b0 if self.beta is None else float(self.beta)
            if (a, b) != (a0, b0):
                raise ValueError(f"{self.family} kernel has fixed weights alpha={a0}, beta={b0}")
        else:
            if self.alpha is None or self.beta is None:
                raise ValueError("hybrid kernel needs both alpha and beta")
            a, b = float(self.alpha), float(self.beta)
            for name, w in (("alpha", a), ("beta", b)):
                if not 0.0 <= w <= 1.0:
                    raise ValueError(f"{name} must lie in [0, 1], got {w!r}")
            if a + b <= 0.0:
                raise ValueError("hybrid kernel with alpha = beta = 0 is identically zero")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def gaussian(cls, epsilon):
        return cls("gaussian", epsilon)

    @classmethod
    def cubic(cls):
        return cls("cubic", 0.0)

    @classmethod
    def hybrid(cls, epsilon, alpha, beta):
        return cls("hybrid", epsilon, alpha, beta)

    @property
    def params(self):
        """``(epsilon, alpha, beta)`` as plain floats."""
        return (self.epsilon, self.alpha, self.beta)

    def __str__(self):
        if self.family == "cubic":
            return "cubic"
        if self.family == "gaussian":
            return f"gaussian(eps={self.epsilon:g})"
        return f"hybrid(eps={self.epsilon:g}, alpha={self.alpha:g}, beta={self.beta:g})"


def _radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    return r


def _gauss(spec, r):
    return np.exp(-(spec.epsilon * r) ** 2)


def _dphi_over_r(spec, r):
    # phi'(r)/r, closed form: no division, exact at r = 0.
    return -2.0 * spec.epsilon**2 * spec.alpha * _gauss(spec, r) + 3.0 * spec.beta * r


def evaluate(spec: KernelSpec, r):
    """Kernel value phi(r)."""
    r = _radius(r)
    return spec.alpha * _gauss(spec, r) + spec.beta * r**3


def radial_derivative(spec: KernelSpec, r, order: int):
    """First or second derivative of phi with respect to r."""
    r = _radius(r)
    eps2 = spec.epsilon**2
    g = _gauss(spec, r)
    if order == 1:
        return -2.0 * eps2 * r * spec.alpha * g + 3.0 * spec.beta * r**2
    if order == 2:
        return spec.alpha * g * (4.0 * eps2**2 * r**2 - 2.0 * eps2) + 6.0 * spec.beta * r
    raise ValueError(f"radial derivative order must be 1 or 2, got {order!r}")


def _offsets(x, center, axis):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    center = np.atleast_1d(np.asarray(center, dtype=float))
    if x.shape[-1] != center.shape[-1]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs {center.shape[-1]}")
    dim = x.shape[-1]
    if not 0 <= axis < dim:
        raise ValueError(f"axis {axis} out of range for dimension {dim}")
    d = x - center
    return d[..., axis], np.sqrt(np.sum(d * d, axis=-1))


def cartesian_first_derivative(spec: KernelSpec, x, center, axis: int = 0):
    """d/dx_axis of phi(|x - center|), evaluated at x."""
    dk, r = _offsets(x, center, axis)
    return _dphi_over_r(spec, r) * dk


def _second_from_offsets(spec, dk, r):
    eps2 = spec.epsilon**2
    g = _gauss(spec, r)
    # d_k^2 / r is bounded by r, so its limit at r = 0 is 0.
    dk2_over_r = np.divide(dk * dk, r, out=np.zeros_like(r, dtype=float), where=r > 0)
    return (
        spec.alpha * g * (4.0 * eps2**2 * dk * dk - 2.0 * eps2)
        + 3.0 * spec.beta * (r + dk2_over_r)
    )


def cartesian_second_derivative(spec: KernelSpec, x, center, axis: int = 0):
    """d^2/dx_axis^2 of phi(|x - center|), evaluated at x."""
    dk, r = _offsets(x, center, axis)
    return _second_from_offsets(spec, dk, r)


def cartesian_laplacian(spec: KernelSpec, r, dim: int):
    """Laplacian of phi(|x|) in ``dim`` dimensions as a function of r = |x|.

    Equals phi''(r) + (dim - 1) phi'(r) / r, with the value dim * phi''(0)
    at the origin.
    """
    if int(dim) != dim or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    r = _radius(r)
    eps2 = spec.epsilon**2
    g = _gauss(spec, r)
    return spec.alpha * g * (4.0 * eps2**2 * r**2 - 2.0 * eps2 * dim) + 3.0 * spec.beta * (dim + 1) * r
