"""File outputs and the command line interface.

Every run can be dumped as plain CSV: one file per degree-of-freedom
family plus a single interleaved dataset on the half-spaced mesh of
size (2 N1 + 1) x (2 N2 + 1), in which even/even entries are corner
values, odd/odd entries are cell averages, and the mixed parities are
the face values. That interleaved grid is what the plotting package
consumes for contour figures.

The same functionality is reachable without Python through the
console script:

    activeflux list-problems
    activeflux run --config my.cfg --out results/
    activeflux converge --problem vortex --meshes 32,64,128

Run:  python3 demos/05_outputs_and_cli.py
"""

import os
import tempfile

import numpy as np

from activeflux.cli import main
from activeflux.output import interleave, write_solution
from activeflux.problems import make_problem
from activeflux.timeloop import run

problem = make_problem("burgers", n1=24, n2=24, t_end=0.1)
dofs, rep = run(problem)

x, y, z = interleave(dofs.grid, dofs)
print(f"interleaved dataset: {z.shape[0]} x {z.shape[1]} values "
      f"(from a {problem.n1} x {problem.n2} mesh)")
print(f"  corner value at ({x[0]:.3f}, {y[0]:.3f}): {z[0, 0, 0]:.6f}")
print(f"  cell average at ({x[1]:.3f}, {y[1]:.3f}): {z[1, 1, 0]:.6f}")

with tempfile.TemporaryDirectory() as tmp:
    paths = write_solution(tmp, problem, dofs.grid, dofs, rep,
                           problem.t_end, dump_theta=True)
    print(f"\nfiles written to a run directory:")
    for key in sorted(paths):
        size = os.path.getsize(paths[key])
        print(f"  {os.path.basename(paths[key]):16s} {size:8d} bytes")

    data = np.loadtxt(paths["avg"], delimiter=",", comments="#", ndmin=2)
    print(f"\navg.csv round-trip: {data.shape[0]} rows, value range "
          f"[{data[:, 2].min():.6f}, {data[:, 2].max():.6f}]")
    print(f"report says:        [{rep.avg_min[0]:.6f}, "
          f"{rep.avg_max[0]:.6f}]  (identical: 17 digit serialization)")

    cfg = os.path.join(tmp, "demo.cfg")
    with open(cfg, "w") as fh:
        fh.write("problem = advection\nn1 = 16\nn2 = 16\nt_end = 0.1\n")
    print("\nrunning the CLI on a small config:")
    code = main(["run", "--config", cfg, "--out", os.path.join(tmp, "o")])
    print(f"exit code {code}")
