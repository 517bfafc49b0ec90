"""Shared random-instance generators for the property and acceptance tests."""

import numpy as np

from hrbfps.diagnostics import condition_number
from hrbfps.geometry import NodeSet
from hrbfps.kernels import KernelSpec
from hrbfps.operators import interpolation_matrix


def random_kernel(rng):
    kind = rng.integers(3)
    if kind == 0:
        return KernelSpec.gaussian(rng.uniform(1.0, 5.0))
    if kind == 1:
        return KernelSpec.cubic()
    return KernelSpec.hybrid(rng.uniform(0.5, 5.0), rng.uniform(0.0, 1.0), rng.uniform(0.01, 1.0))


def interpolation_instance(seed, max_n=25, max_cond=1e10):
    """Random 1D interpolation problem, or None when it is too ill-conditioned."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, max_n + 1))
    spec = random_kernel(rng)
    nodes = NodeSet(np.sort(rng.uniform(-1.0, 1.0, n)))
    a = interpolation_matrix(spec, nodes)
    if condition_number(a.matrix) > max_cond:
        return None
    return spec, a, rng.normal(size=n)
