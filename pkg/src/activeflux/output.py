"""File outputs: interleaved half-mesh dataset, per-family CSV dumps,
run report, residual history, optional limiter diagnostics.

The interleaved dataset lives on the half-spaced grid of size
(2 N1 + 1) x (2 N2 + 1): even/even indices carry node values, even/odd
vertical-face values, odd/even horizontal-face values, and odd/odd the
cell averages, which is how the solver's solutions are plotted. CSV
files are long-format (x, y, components) with '#' metadata headers and
17 significant digits, so doubles round-trip exactly.
"""

import dataclasses
import json
import os

import numpy as np

from .equations import component_names


def interleave(grid, dofs):
    """Half-mesh dataset (X, Y, Z) with the parity placement rule."""
    n1, n2, m = grid.n1, grid.n2, dofs.m
    z = np.empty((2 * n1 + 1, 2 * n2 + 1, m))
    z[0::2, 0::2] = dofs.interior("node")
    z[0::2, 1::2] = dofs.interior("facex")
    z[1::2, 0::2] = dofs.interior("facey")
    z[1::2, 1::2] = dofs.interior("avg")
    x = grid.x0 + np.arange(2 * n1 + 1) * (grid.dx / 2)
    y = grid.y0 + np.arange(2 * n2 + 1) * (grid.dy / 2)
    return x, y, z


def _write_table(path, header_lines, columns, x, y, z):
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"# columns: {','.join(columns)}\n")
        m = z.shape[-1]
        for i in range(x.size):
            xi = f"{x[i]:.17g}"
            for j in range(y.size):
                comps = ",".join(f"{z[i, j, c]:.17g}" for c in range(m))
                fh.write(f"{xi},{y[j]:.17g},{comps}\n")


def _meta_lines(problem, grid, report, t, extra=None):
    lines = [
        f"problem = {problem.name}",
        f"model = {type(problem.model).__name__.lower()}",
        f"m = {problem.model.m}",
        f"n1 = {grid.n1}",
        f"n2 = {grid.n2}",
        f"domain = {grid.x0},{grid.x1},{grid.y0},{grid.y1}",
        f"time = {t:.17g}",
    ]
    if problem.model.m > 1:
        lines.append(f"gamma = {problem.model.gamma:.17g}")
    if report is not None:
        lines.append(f"splitting = {report.splitting}")
        lines.append(f"steps = {report.steps}")
    if extra:
        lines.extend(extra)
    return lines


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    raise TypeError(f"not serializable: {type(obj)}")


def write_solution(outdir, problem, grid, dofs, report, t,
                   config_echo=None, dump_theta=False):
    """Write all run artifacts into outdir; returns the paths written."""
    os.makedirs(outdir, exist_ok=True)
    names = component_names(problem.model)
    meta = _meta_lines(problem, grid, report, t,
                       extra=[f"config: {line}" for line in (config_echo or [])])
    paths = {}

    x, y, z = interleave(grid, dofs)
    p = os.path.join(outdir, "interleaved.csv")
    _write_table(p, meta + ["grid = interleaved half mesh"],
                 ["x", "y"] + names, x, y, z)
    paths["interleaved"] = p

    for fam in ("avg", "facex", "facey", "node"):
        xs, ys = grid.coords(fam)
        sx, sy = grid.interior(fam)
        p = os.path.join(outdir, f"{fam}.csv")
        _write_table(p, meta + [f"grid = {fam}"], ["x", "y"] + names,
                     xs[sx], ys[sy], dofs.interior(fam))
        paths[fam] = p

    if report is not None:
        rep = dataclasses.asdict(report)
        # per-face limiter arrays go to their own CSVs, not the report
        rep["diag"] = None
        p = os.path.join(outdir, "report.json")
        with open(p, "w") as fh:
            json.dump(rep, fh, indent=1, default=_jsonable)
        paths["report"] = p

        p = os.path.join(outdir, "residuals.csv")
        with open(p, "w") as fh:
            fh.write("# columns: step,t,residual\n")
            for step, tt, res in report.residuals:
                fh.write(f"{step},{tt:.17g},{res:.17g}\n")
        paths["residuals"] = p

    if dump_theta and report is not None and report.diag is not None:
        g = grid.ghost
        xf, yf = grid.xfaces(), grid.yfaces()
        xc, yc = grid.xcenters(), grid.ycenters()
        fields = {
            "theta_x": (xf[g:g + grid.n1 + 1], yc[g:g + grid.n2]),
            "theta_y": (xc[g:g + grid.n1], yf[g:g + grid.n2 + 1]),
            "sensor_x": (xf[g:g + grid.n1 + 1], yc[g:g + grid.n2]),
            "sensor_y": (xc[g:g + grid.n1], yf[g:g + grid.n2 + 1]),
        }
        for key, (xs, ys) in fields.items():
            arr = np.asarray(report.diag[key], dtype=float)[..., None]
            p = os.path.join(outdir, f"{key}.csv")
            _write_table(p, meta + [f"grid = {key} faces"],
                         ["x", "y", key], xs, ys, arr)
            paths[key] = p
    return paths
