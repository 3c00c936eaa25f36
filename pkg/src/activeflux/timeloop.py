"""Time integration: step control, SSP-RK3 stages, and the run driver.

Each forward Euler stage is the full pipeline: ghost fill at the stage
time, limited average update, high-order point updates with optional
scaling limiting, then a strict admissibility check of every DoF family.
SSP-RK3 combines three such stages convexly; the stage times are t,
t + dt, and t + dt/2.

The CFL part of the step size uses the spectral radii of the cell
averages. When limiting is active, the step is additionally capped by
dt <= 1/4 min(dx / R1, dy / R2) with R the largest directional spectral
radius over all four DoF families; on uniform meshes that cap implies
both the average and the point first-order schemes act as convex
combinations. Ghost values participate in the speed scan so that inflow
states are respected before they enter the domain.
"""

import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalStateError
from .limiting_average import limited_average_update
from .limiting_point import (limit_point_euler, limit_point_scalar,
                             llf_point_updates)
from .mesh import FAMILIES, allocate_dofs, build_grid, lincomb
from .problems import error_norms, fill_ghosts, init_dofs, total_average
from .scheme import point_residuals


@dataclass
class StepControl:
    cfl: float = 0.25
    bp_dt: bool = True
    log_every: int = 0
    max_steps: int = 2000000

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must be in (0, 1], got {self.cfl}")


@dataclass
class RunReport:
    problem: str
    splitting: str
    n1: int
    n2: int
    t_end: float
    steps: int = 0
    wall_time: float = 0.0
    avg_min: np.ndarray = None
    avg_max: np.ndarray = None
    point_min: np.ndarray = None
    point_max: np.ndarray = None
    min_density: float = None
    min_pressure: float = None
    mass_initial: np.ndarray = None
    mass_final: np.ndarray = None
    residuals: list = field(default_factory=list)
    sensor_frac_max: float = 0.0
    theta_min: float = 1.0
    errors: list = None
    diag: dict = None


def compute_dt(model, dofs, grid, control, limited):
    """Step size from the CFL condition, capped by the BP constraint."""
    r1 = float(model.spectral_radius(dofs.avg, 0).max())
    r2 = float(model.spectral_radius(dofs.avg, 1).max())
    speed = max(r1 / grid.dx, r2 / grid.dy)
    if speed <= 0.0:
        raise ConfigError("zero wave speed everywhere; nothing to advance")
    dt = control.cfl / speed
    if limited and control.bp_dt:
        p1, p2 = r1, r2
        for fam in ("facex", "facey", "node"):
            arr = dofs.array(fam)
            p1 = max(p1, float(model.spectral_radius(arr, 0).max()))
            p2 = max(p2, float(model.spectral_radius(arr, 1).max()))
        dt = min(dt, 0.25 * min(grid.dx / p1, grid.dy / p2))
    return dt


def ssp_rk3(forward_euler, combine, u0, t, dt):
    """Generic three-stage SSP-RK3 skeleton over forward Euler steps."""
    u1 = forward_euler(u0, t)
    u2 = combine(0.75, u0, 0.25, forward_euler(u1, t + dt))
    return combine(1.0 / 3.0, u0, 2.0 / 3.0, forward_euler(u2, t + 0.5 * dt))


def _check_admissible(model, dofs, stats):
    for fam in FAMILIES:
        a = dofs.interior(fam)
        if not np.isfinite(a).all():
            raise NumericalStateError("non-finite state", family=fam)
        if model.m > 1:
            rho_min = float(a[..., 0].min())
            with np.errstate(invalid="ignore"):
                p_min = float(model.pressure(a).min())
            stats["min_rho"] = min(stats["min_rho"], rho_min)
            stats["min_p"] = min(stats["min_p"], p_min)
            if rho_min <= 0.0 or p_min <= 0.0:
                raise NumericalStateError(
                    f"negative density or pressure (rho_min={rho_min:.3e}, "
                    f"p_min={p_min:.3e})", family=fam)


def _stage(problem, splitting, cfg, dofs, t_stage, dt, stats):
    model = problem.model
    grid = dofs.grid
    fill_ghosts(problem, dofs, t_stage)
    avg_new, diag = limited_average_update(model, cfg, dofs, dt)
    rn, rfx, rfy = point_residuals(model, splitting, dofs)
    uh_nd = dofs.node[grid.interior("node")] + dt * rn
    uh_fx = dofs.facex[grid.interior("facex")] + dt * rfx
    uh_fy = dofs.facey[grid.interior("facey")] + dt * rfy
    if cfg.point_bp:
        ul_nd, ul_fx, ul_fy = llf_point_updates(model, dofs, dt)
        if model.m == 1:
            uh_nd = limit_point_scalar(uh_nd, ul_nd, cfg.bounds)
            uh_fx = limit_point_scalar(uh_fx, ul_fx, cfg.bounds)
            uh_fy = limit_point_scalar(uh_fy, ul_fy, cfg.bounds)
        else:
            uh_nd = limit_point_euler(model, uh_nd, ul_nd, cfg.eps)
            uh_fx = limit_point_euler(model, uh_fx, ul_fx, cfg.eps)
            uh_fy = limit_point_euler(model, uh_fy, ul_fy, cfg.eps)
    out = allocate_dofs(grid, model.m)
    out.avg[grid.interior("avg")] = avg_new
    out.node[grid.interior("node")] = uh_nd
    out.facex[grid.interior("facex")] = uh_fx
    out.facey[grid.interior("facey")] = uh_fy
    _check_admissible(model, out, stats)
    if diag:
        stats["sensor_frac"] = max(stats["sensor_frac"], diag["sensor_frac"])
        stats["theta_min"] = min(stats["theta_min"], diag["theta_min"])
        stats["diag"] = diag
    return out


def ssp_rk3_step(problem, splitting, cfg, dofs, t, dt, stats):
    def fe(u, t_stage):
        return _stage(problem, splitting, cfg, u, t_stage, dt, stats)

    def combine(ca, a, cb, b):
        out = lincomb(ca, a, cb, b)
        _check_admissible(problem.model, out, stats)
        return out

    return ssp_rk3(fe, combine, dofs, t, dt)


def _point_ranges(dofs, grid):
    mins = []
    maxs = []
    for fam in ("facex", "facey", "node"):
        a = dofs.interior(fam)
        mins.append(a.min(axis=(0, 1)))
        maxs.append(a.max(axis=(0, 1)))
    return (np.minimum.reduce(mins), np.maximum.reduce(maxs))


def run(problem, splitting="llf", limiter=None, control=None,
        snapshot_times=None, on_snapshot=None):
    """Advance the problem to its final time; return (dofs, report).

    snapshot_times lists intermediate times to hit exactly; the step size
    is clipped to land on each, and on_snapshot(dofs, t) is called there.
    """
    model = problem.model
    cfg = problem.limiter_config() if limiter is None else limiter
    ctl = StepControl() if control is None else control
    grid = build_grid(problem.x0, problem.x1, problem.y0, problem.y1,
                      problem.n1, problem.n2)
    dofs = init_dofs(problem, grid)
    limited = cfg.avg_bp or cfg.point_bp
    stats = {"min_rho": np.inf, "min_p": np.inf, "sensor_frac": 0.0,
             "theta_min": 1.0, "diag": None}
    report = RunReport(problem=problem.name, splitting=splitting,
                       n1=problem.n1, n2=problem.n2, t_end=problem.t_end)
    report.mass_initial = total_average(grid, dofs)
    cell = grid.dx * grid.dy
    t = 0.0
    t_end = problem.t_end
    snaps = sorted(s for s in (snapshot_times or ())
                   if 0.0 < s < t_end * (1.0 - 1e-12))
    si = 0
    start = time.perf_counter()
    while t < t_end * (1.0 - 1e-14):
        if report.steps >= ctl.max_steps:
            raise NumericalStateError(
                f"exceeded max_steps={ctl.max_steps}", step=report.steps,
                time=t)
        fill_ghosts(problem, dofs, t)
        dt = min(compute_dt(model, dofs, grid, ctl, limited), t_end - t)
        if si < len(snaps):
            dt = min(dt, snaps[si] - t)
        prev_avg = dofs.avg[grid.interior("avg")].copy()
        try:
            dofs = ssp_rk3_step(problem, splitting, cfg, dofs, t, dt, stats)
        except NumericalStateError as err:
            err.step = report.steps
            err.time = t
            raise
        report.steps += 1
        t += dt
        res = float(np.abs(dofs.avg[grid.interior("avg")] - prev_avg).sum()
                    * cell / dt)
        report.residuals.append((report.steps, t, res))
        if si < len(snaps) and t >= snaps[si] * (1.0 - 1e-14):
            if on_snapshot is not None:
                on_snapshot(dofs, snaps[si])
            si += 1
        if ctl.log_every and report.steps % ctl.log_every == 0:
            extra = ""
            if model.m > 1:
                extra = (f" min_rho={stats['min_rho']:.3e}"
                         f" min_p={stats['min_p']:.3e}")
            print(f"step {report.steps} t={t:.6f} dt={dt:.3e}{extra}",
                  file=sys.stderr)
    report.wall_time = time.perf_counter() - start
    a = dofs.interior("avg")
    report.avg_min = a.min(axis=(0, 1))
    report.avg_max = a.max(axis=(0, 1))
    report.point_min, report.point_max = _point_ranges(dofs, grid)
    if model.m > 1:
        report.min_density = stats["min_rho"]
        report.min_pressure = stats["min_p"]
    report.mass_final = total_average(grid, dofs)
    report.sensor_frac_max = stats["sensor_frac"]
    report.theta_min = stats["theta_min"]
    report.diag = stats["diag"]
    if problem.exact is not None:
        report.errors = [float(e) for e in
                         error_norms(problem, grid, dofs, t_end)]
    return dofs, report
