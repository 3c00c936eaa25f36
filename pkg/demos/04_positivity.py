"""Positivity preservation on a blast wave.

A Sedov-type point blast puts near-vacuum ambient gas (p = 1e-12) next
to a huge energy spike. Without limiting, the high-order update
produces a negative pressure within a few steps and the run aborts
with a diagnostic. With the bound-preserving limiters the run
completes and density and pressure stay positive at every degree of
freedom of every Runge-Kutta stage.

This demo uses a reduced 48^2 mesh and a short time so it finishes in
seconds; the full benchmark (101^2, T=1) runs in the acceptance suite.

Run:  python3 demos/04_positivity.py
"""

from activeflux.errors import NumericalStateError
from activeflux.problems import make_problem
from activeflux.timeloop import run

print("sedov blast, 48^2 cells, T=0.1")

problem = make_problem("sedov", n1=48, n2=48, t_end=0.1,
                       avg_bp=False, point_bp=False, kappa=0.0)
try:
    run(problem)
    print("  unlimited: completed (unexpected)")
except NumericalStateError as err:
    print(f"  unlimited: aborts at step {err.step}, t={err.time:.2e}")
    print(f"             ({err})")

problem = make_problem("sedov", n1=48, n2=48, t_end=0.1)
_, rep = run(problem)
print(f"  limited:   {rep.steps} steps, min density {rep.min_density:.3e}, "
      f"min pressure {rep.min_pressure:.3e}")
print(f"             worst flux blend factor {rep.theta_min:.3f}, "
      f"final density range [{rep.avg_min[0]:.3f}, {rep.avg_max[0]:.3f}]")

print()
print("the shock sensor concentrates the limiting near the blast front;")
print(f"at most {rep.sensor_frac_max:.1%} of faces saw a sensor factor "
      "below 0.999 in any step.")
