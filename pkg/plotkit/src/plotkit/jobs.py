"""Plot jobs: one dataclass describing a figure, one function per kind.

plot(job) renders the image and returns a metadata dict; the CLI prints
that dict as `key = value` lines so callers can verify a figure (level
sets, sample counts) without opening the image. Contour levels are
exactly the requested equispaced set, np.linspace(min, max, count).
"""

from dataclasses import dataclass

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import PlotError, read_interleaved, read_report, read_table

KINDS = ("contour", "cutline", "theta", "residual", "convergence")


@dataclass(frozen=True)
class PlotJob:
    inputs: tuple
    kind: str
    out: str
    levels: int = 30
    level_min: float = None
    level_max: float = None
    component: int = 0
    row: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotError(f"unknown plot kind {self.kind!r}, "
                            f"expected one of {KINDS}")
        if not self.inputs:
            raise PlotError("no input files given")
        if (self.level_min is None) != (self.level_max is None):
            raise PlotError("level_min and level_max must be given together")
        if self.level_min is not None and not self.level_min < self.level_max:
            raise PlotError(f"need level_min < level_max, got "
                            f"[{self.level_min}, {self.level_max}]")
        if self.levels < 1:
            raise PlotError(f"need at least one level, got {self.levels}")


def _component(job, names, fields):
    if not 0 <= job.component < fields.shape[-1]:
        raise PlotError(f"component {job.component} out of range, file has "
                        f"{fields.shape[-1]} ({', '.join(names)})")
    return names[job.component], fields[..., job.component]


def _save(fig, out):
    fig.savefig(out, dpi=150)
    plt.close(fig)


def _fmt(values):
    return ",".join(f"{v:.17g}" for v in values)


def _contour(job):
    meta, names, x, y, fields = read_interleaved(job.inputs[0])
    name, z = _component(job, names, fields)
    if job.level_min is not None:
        lo, hi = job.level_min, job.level_max
    else:
        lo, hi = float(z.min()), float(z.max())
    # a constant field has no level set; keep the filled image anyway
    levels = np.linspace(lo, hi, job.levels) if hi > lo else np.array([])
    fig, ax = plt.subplots(figsize=(6.0, 6.0 * (y[-1] - y[0]) / (x[-1] - x[0])
                                    if x[-1] > x[0] else 6.0))
    ax.pcolormesh(x, y, z.T, shading="gouraud", cmap="viridis")
    if levels.size:
        ax.contour(x, y, z.T, levels=levels, colors="black",
                   linewidths=0.5)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{meta.get('problem', '?')}: {name} at t={meta.get('time', '?')}")
    _save(fig, job.out)
    step = (hi - lo) / (levels.size - 1) if levels.size > 1 else 0.0
    return {"component": name, "level_count": int(levels.size),
            "level_step": step, "levels": _fmt(levels)}


def _cutline(job):
    meta, names, x, y, fields = read_interleaved(job.inputs[0])
    name, z = _component(job, names, fields)
    if job.row is not None:
        if not 0 <= job.row < y.size:
            raise PlotError(f"row {job.row} out of range 0..{y.size - 1}")
        coord, values = x, z[:, job.row]
        mode = f"row {job.row} (y={y[job.row]:.17g})"
        xlabel = "x"
    else:
        if x.size != y.size:
            raise PlotError(f"diagonal cut needs a square dataset, got "
                            f"{x.size} x {y.size}")
        idx = np.arange(x.size)
        coord, values = x, z[idx, idx]
        mode = "diagonal y=x"
        xlabel = "x (= y)"
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(coord, values, marker=".", markersize=3, linewidth=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(name)
    ax.set_title(f"{meta.get('problem', '?')}: {name} along {mode}")
    _save(fig, job.out)
    return {"component": name, "mode": mode, "samples": int(values.size),
            "value_min": float(values.min()), "value_max": float(values.max())}


def _theta(job):
    meta, columns, data = read_table(job.inputs[0])
    from .io import reshape_field
    x, y, fields = reshape_field(job.inputs[0], meta, columns, data)
    values = fields[..., 0]
    fig, ax = plt.subplots(figsize=(6.5, 5.0))
    im = ax.pcolormesh(x, y, values.T, vmin=0.0, vmax=1.0, cmap="inferno")
    fig.colorbar(im, ax=ax, label=columns[2])
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{meta.get('problem', '?')}: {columns[2]}")
    _save(fig, job.out)
    return {"field": columns[2], "min": float(values.min()),
            "max": float(values.max()),
            "active_fraction": float((values < 0.999).mean())}


def _residual(job):
    meta, columns, data = read_table(job.inputs[0])
    steps, res = data[:, 0], data[:, 2]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.semilogy(steps, res)
    ax.set_xlabel("step")
    ax.set_ylabel("residual")
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, job.out)
    return {"steps": int(steps[-1]), "first": float(res[0]),
            "last": float(res[-1]),
            "decay": float(res[-1] / res[0]) if res[0] else float("nan")}


def _convergence(job):
    reports = [read_report(p) for p in job.inputs]
    for rep, path in zip(reports, job.inputs):
        if not rep.get("errors"):
            raise PlotError(f"{path}: report carries no errors "
                            "(problem has no exact solution?)")
    reports.sort(key=lambda r: r["n1"])
    meshes = [r["n1"] for r in reports]
    if len(set(meshes)) != len(meshes):
        raise PlotError(f"duplicate mesh sizes in inputs: {meshes}")
    errors = np.array([r["errors"] for r in reports])
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    for c in range(errors.shape[1]):
        ax.loglog(meshes, errors[:, c], marker="o", label=f"component {c}")
    ref = errors[0, 0] * (meshes[0] / np.asarray(meshes, dtype=float)) ** 3
    ax.loglog(meshes, ref, "k--", linewidth=0.8, label="third order")
    ax.set_xlabel("N")
    ax.set_ylabel("l1 error")
    ax.legend()
    _save(fig, job.out)
    orders = []
    if len(meshes) > 1:
        na, nb = meshes[-2], meshes[-1]
        orders = list(np.log(errors[-2] / errors[-1]) / np.log(nb / na))
    return {"meshes": ",".join(str(n) for n in meshes),
            "orders": _fmt(orders)}


_PLOTTERS = {"contour": _contour, "cutline": _cutline, "theta": _theta,
             "residual": _residual, "convergence": _convergence}


def plot(job):
    """Render one figure; returns the verification metadata dict."""
    meta = _PLOTTERS[job.kind](job)
    return {"kind": job.kind, "out": job.out, **meta}
