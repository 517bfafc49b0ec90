"""
Laplace and Helmholtz against Chebyshev
=======================================

Solve the Laplace problem with piecewise boundary data and the Helmholtz
source problem on a 25 x 25 grid, then measure the distance to the
Chebyshev pseudospectral solution on the same nodes.

Run with ``python demos/laplace_vs_chebyshev.py``.
"""

import numpy as np

from hrbfps import KernelSpec
from hrbfps.problems import solve_helmholtz2d, solve_laplace2d

lap = solve_laplace2d(24, KernelSpec.hybrid(1.2652, 0.81219, 4.7835e-05), compare_reference=True)
hel = solve_helmholtz2d(24, KernelSpec.hybrid(1.37, 0.807, 1.01e-6), compare_reference=True)

for name, res in (("laplace", lap), ("helmholtz", hel)):
    u = res.solution.reshape(25, 25)
    print(f"{name:>9}: max |u - u_cheb| {res.reference_deviation:.2e}  "
          f"range [{u.min():.3f}, {u.max():.3f}]  cond(system) {res.condition_numbers['system']:.2e}")

# centre line of the Laplace field, x fixed at 0
centre = lap.solution.reshape(25, 25)[12]
print("laplace u(0, z):", np.array2string(centre[::4], precision=3))
