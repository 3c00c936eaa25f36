"""Third-order convergence on a smooth problem.

The solver evolves cell averages plus independent point values on faces
and corners, so each cell carries a quadratic reconstruction and the
design order is three. This script measures it two ways: a smooth sine
advected for a short time, and the isentropic vortex (the standard
smooth Euler benchmark) under all three flux vector splittings.

Run:  python3 demos/01_smooth_convergence.py
"""

import dataclasses

import numpy as np

from activeflux.cli import convergence_suite
from activeflux.problems import make_problem
from activeflux.timeloop import run


def smooth_advection(n):
    def init(x, y, t=0.0):
        # trailing axis: one conserved component
        u = 0.5 + 0.25 * np.sin(2.0 * np.pi * (x + y - 2.0 * t))
        return u[..., None]

    base = make_problem("advection", n1=n, n2=n, t_end=0.5,
                        avg_bp=False, point_bp=False)
    return dataclasses.replace(base, init=init, exact=init)


print("smooth advection, l1 error of the averages at T=0.5")
prev = None
for n in (16, 32, 64):
    _, rep = run(smooth_advection(n))
    err = rep.errors[0]
    order = "" if prev is None else f"  order {np.log2(prev / err):.3f}"
    print(f"  N={n:3d}  error {err:.3e}{order}")
    prev = err

print()
print("isentropic vortex at T=2, density l1 error per splitting")
for kind in ("llf", "sw", "vh"):
    table = convergence_suite("vortex", [16, 32, 64], splitting=kind,
                              t_end=2.0)
    errs = [e[0] for e in table["errors"]]
    orders = [o[0] for o in table["orders"]]
    row = "  ".join(f"{e:.3e}" for e in errs)
    print(f"  {kind:3s}: {row}   orders "
          + ", ".join(f"{o:.2f}" for o in orders))

print()
print("all three splittings converge at close to the design order on")
print("smooth data; Steger-Warming (sw) gives up a fraction of an order")
print("at sonic points, which is its known behavior.")
