"""Command line driver.

Three subcommands: `run` advances one configured problem and writes the
solution files, `converge` runs a mesh sequence and prints an error and
order table, `list-problems` shows the registry with its defaults.

Config files are line-oriented `key = value` text with `#` comments.
Exit codes sort failures by category: 2 for configuration problems,
3 for numerical failures (inadmissible states, step-count blowup),
4 for file system errors.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .equations import component_names, validate_splitting
from .errors import ConfigError, NumericalStateError
from .output import write_solution
from .problems import make_problem, problem_names
from .timeloop import StepControl, run

_BOOLS = {"true": True, "on": True, "yes": True, "1": True,
          "false": False, "off": False, "no": False, "0": False}


def _cast_bool(value):
    try:
        return _BOOLS[value.lower()]
    except KeyError:
        raise ValueError(f"expected a boolean, got {value!r}") from None


def _cast_mp_mode(value):
    if value not in ("global", "local"):
        raise ValueError(f"expected 'global' or 'local', got {value!r}")
    return value


def _cast_times(value):
    times = tuple(float(part) for part in value.split(","))
    if any(not np.isfinite(t) or t <= 0.0 for t in times):
        raise ValueError(f"output times must be finite and positive: {value!r}")
    return tuple(sorted(set(times)))


_CASTS = {
    "problem": str,
    "splitting": str,
    "n1": int,
    "n2": int,
    "t_end": float,
    "cfl": float,
    "kappa": float,
    "avg_bp": _cast_bool,
    "point_bp": _cast_bool,
    "mp_mode": _cast_mp_mode,
    "out": str,
    "output_times": _cast_times,
    "dump_theta": _cast_bool,
    "log_every": int,
}


@dataclass
class RunConfig:
    """Validated run description; None fields fall back to problem defaults."""

    problem: str
    splitting: str = "llf"
    n1: int = None
    n2: int = None
    t_end: float = None
    cfl: float = 0.25
    kappa: float = None
    avg_bp: bool = None
    point_bp: bool = None
    mp_mode: str = None
    out: str = None
    output_times: tuple = field(default_factory=tuple)
    dump_theta: bool = False
    log_every: int = 0


def parse_config(text):
    """Parse and validate config text; raises ConfigError with line numbers."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CASTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        try:
            values[key] = _CASTS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {key}: {exc}") from None
    if "problem" not in values:
        raise ConfigError("missing required key 'problem'")
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg):
    for key in ("n1", "n2"):
        val = getattr(cfg, key)
        if val is not None and val < 1:
            raise ConfigError(f"{key} must be positive, got {val}")
    if cfg.t_end is not None and cfg.t_end < 0.0:
        raise ConfigError(f"t_end must be nonnegative, got {cfg.t_end}")
    if cfg.kappa is not None and cfg.kappa < 0.0:
        raise ConfigError(f"kappa must be nonnegative, got {cfg.kappa}")
    if not 0.0 < cfg.cfl <= 1.0:
        raise ConfigError(f"cfl must be in (0, 1], got {cfg.cfl}")
    if cfg.log_every < 0:
        raise ConfigError(f"log_every must be nonnegative, got {cfg.log_every}")
    problem = build_problem(cfg)
    try:
        validate_splitting(problem.model, cfg.splitting)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return problem


def build_problem(cfg):
    """Instantiate the configured problem with its overrides applied."""
    return make_problem(cfg.problem, n1=cfg.n1, n2=cfg.n2, t_end=cfg.t_end,
                        kappa=cfg.kappa, avg_bp=cfg.avg_bp,
                        point_bp=cfg.point_bp, mp_mode=cfg.mp_mode)


def _control(cfg):
    return StepControl(cfl=cfg.cfl, log_every=cfg.log_every)


def cmd_run(args):
    with open(args.config) as fh:
        text = fh.read()
    cfg = parse_config(text)
    problem = build_problem(cfg)
    outdir = args.out or cfg.out or f"out_{problem.name}"
    echo = [line.strip() for line in text.splitlines() if line.strip()]

    def snapshot(dofs, t):
        sub = os.path.join(outdir, f"t_{t:.6g}")
        write_solution(sub, problem, dofs.grid, dofs, None, t,
                       config_echo=echo)
        print(f"wrote snapshot at t={t:.6g}: {sub}")

    dofs, report = run(problem, splitting=cfg.splitting,
                       control=_control(cfg),
                       snapshot_times=cfg.output_times,
                       on_snapshot=snapshot)
    write_solution(outdir, problem, dofs.grid, dofs, report, problem.t_end,
                   config_echo=echo, dump_theta=cfg.dump_theta)

    names = component_names(problem.model)
    print(f"problem={problem.name} splitting={cfg.splitting} "
          f"mesh={problem.n1}x{problem.n2} steps={report.steps} "
          f"t={problem.t_end:g} wall={report.wall_time:.2f}s")
    for c, name in enumerate(names):
        print(f"  avg {name}: [{report.avg_min[c]:.10g}, "
              f"{report.avg_max[c]:.10g}]  points: [{report.point_min[c]:.10g},"
              f" {report.point_max[c]:.10g}]")
    if report.min_density is not None:
        print(f"  min density={report.min_density:.6g} "
              f"min pressure={report.min_pressure:.6g}")
    if report.errors is not None:
        errs = " ".join(f"{name}={err:.6e}"
                        for name, err in zip(names, report.errors))
        print(f"  l1 errors: {errs}")
    print(f"wrote {outdir}")
    return 0


def convergence_suite(problem_name, meshes, splitting="llf", t_end=None,
                      cfl=0.25, control=None):
    """Run a mesh sequence; returns meshes, per-component l1 errors,
    and pairwise observed orders (empty entry when a pair repeats a mesh)."""
    errors = []
    for n in meshes:
        problem = make_problem(problem_name, n1=n, n2=n, t_end=t_end)
        ctl = control if control is not None else StepControl(cfl=cfl)
        _, report = run(problem, splitting=splitting, control=ctl)
        if report.errors is None:
            raise ConfigError(
                f"problem {problem_name!r} has no exact solution")
        errors.append(report.errors)
    orders = []
    for (na, ea), (nb, eb) in zip(zip(meshes, errors), zip(meshes[1:], errors[1:])):
        if na == nb:
            orders.append([])
            continue
        scale = np.log(nb / na)
        orders.append([float(np.log(a / b) / scale) if a > 0 and b > 0
                       else float("nan") for a, b in zip(ea, eb)])
    names = component_names(make_problem(problem_name).model)
    return {"meshes": list(meshes), "components": names,
            "errors": errors, "orders": orders}


def _print_convergence(table):
    names = table["components"]
    header = f"{'N':>6}"
    for name in names:
        header += f" {'l1[' + name + ']':>14} {'order':>7}"
    print(header)
    for i, (n, errs) in enumerate(zip(table["meshes"], table["errors"])):
        row = f"{n:>6}"
        pair = table["orders"][i - 1] if i > 0 else []
        for c, err in enumerate(errs):
            order = f"{pair[c]:7.3f}" if pair else f"{'-':>7}"
            row += f" {err:14.6e} {order}"
        print(row)


def cmd_converge(args):
    try:
        meshes = [int(part) for part in args.meshes.split(",")]
    except ValueError:
        raise ConfigError(f"bad mesh list {args.meshes!r}, "
                          "expected comma-separated integers") from None
    if any(n < 1 for n in meshes):
        raise ConfigError(f"mesh sizes must be positive: {args.meshes!r}")
    table = convergence_suite(args.problem, meshes, splitting=args.splitting,
                              t_end=args.t_end, cfl=args.cfl)
    _print_convergence(table)
    return 0


def cmd_list_problems(args):
    for name in problem_names():
        p = make_problem(name)
        model = type(p.model).__name__.lower()
        flags = []
        if p.avg_bp:
            flags.append("avg_bp")
        if p.point_bp:
            flags.append("point_bp")
        if p.kappa:
            flags.append(f"kappa={p.kappa:g}")
        extra = f"  [{', '.join(flags)}]" if flags else ""
        print(f"{name:18s} {model:10s} {p.n1}x{p.n2:<5d} "
              f"T={p.t_end:<6g}{extra}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="activeflux",
        description="Third-order active flux solver on Cartesian meshes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one configured problem")
    p.add_argument("--config", required=True, help="config file path")
    p.add_argument("--out", help="output directory (overrides config)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("converge", help="mesh refinement error table")
    p.add_argument("--problem", required=True)
    p.add_argument("--meshes", required=True,
                   help="comma-separated cell counts, e.g. 32,64,128")
    p.add_argument("--splitting", default="llf")
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.add_argument("--cfl", type=float, default=0.25)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("list-problems", help="show the problem registry")
    p.set_defaults(func=cmd_list_problems)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalStateError as exc:
        where = ""
        if exc.step is not None:
            where = f" (step {exc.step}, t={exc.time:.6g})"
        print(f"numerical failure: {exc}{where}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
