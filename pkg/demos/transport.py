"""
Advection with implicit Euler
=============================

March u_t + u_x = 0 on [-1, 1] from a smooth pulse, with the inflow value
held fixed, and halve the time step to see first-order convergence.

Run with ``python demos/transport.py``.
"""

from hrbfps import KernelSpec
from hrbfps.problems import solve_transport1d

spec = KernelSpec.hybrid(1.0, 0.8, 0.1)
prev = None
for dt in (8e-3, 4e-3, 2e-3, 1e-3):
    res = solve_transport1d(64, spec, dt=dt, diagnostics=False)
    ratio = "" if prev is None else f"  ratio {prev / res.max_error:.2f}"
    print(f"dt {dt:.0e}: max error {res.max_error:.3e}{ratio}")
    prev = res.max_error

# The error halves with the step: the spatial operator is accurate enough
# that the backward Euler truncation error dominates.
