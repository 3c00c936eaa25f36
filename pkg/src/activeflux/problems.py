"""Benchmark problems: initial data, boundary fills, reference solutions.

Each problem bundles a model, domain, default mesh, final time, boundary
conditions, and the limiter settings it is normally run with. Initial
cell averages are formed by a 3x3 tensor-product Simpson rule per cell
(exact through cubics in each variable); point values are direct
evaluations at their locations.

Boundary handling is a two-pass ghost fill: the x sides are filled first
over interior rows, then the y sides over the full array width, so the
corner ghosts are defined by composing the two rules in a fixed order.
Dirichlet sides also pin the point values that lie exactly on the
boundary (face centers and nodes of the boundary column or row); a
time-dependent state function makes this cover the moving-shock top
boundary of the double Mach reflection. Reflective sides mirror all
families and negate the normal momentum, but never touch the point
values sitting on the wall itself: wall point treatment is sensitive and
we deliberately only mirror.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .equations import Advection, Burgers, Euler
from .limiting_average import LimiterConfig
from .mesh import allocate_dofs

_SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class Boundary:
    """One side's condition: kind plus an optional state function.

    kinds: periodic | outflow | reflective | dirichlet | dmr_bottom.
    state(x, y, t) returns conserved components and must broadcast; it is
    required for dirichlet and dmr_bottom.
    """
    kind: str
    state: object = None


@dataclass(frozen=True)
class Problem:
    name: str
    model: object
    x0: float
    x1: float
    y0: float
    y1: float
    n1: int
    n2: int
    t_end: float
    boundaries: dict
    init: object
    kappa: float = 0.0
    exact: object = None
    bounds: tuple = None
    avg_bp: bool = False
    point_bp: bool = False
    mp_mode: str = "global"
    patch_avg: object = None

    def limiter_config(self):
        return LimiterConfig(avg_bp=self.avg_bp, point_bp=self.point_bp,
                             mp_mode=self.mp_mode, bounds=self.bounds,
                             kappa=self.kappa)


def _wrap(v, lo, length):
    return lo + np.mod(v - lo, length)


def _stack(*comps):
    return np.stack(np.broadcast_arrays(*comps), axis=-1)


# ---------------------------------------------------------------- initial data

def _advection_init(x, y):
    r = np.sqrt((x - 0.25) ** 2 + (y - 0.25) ** 2)
    cone = np.where(r < 0.2, 1.0 - 5.0 * r, 0.0)
    square = np.where(
        np.maximum(np.abs(x - 0.75), np.abs(y - 0.75)) < 0.2, 1.0, 0.0)
    return _stack(np.where(r < 0.2, cone, square))


def _burgers_init(x, y):
    return _stack(0.5 + np.sin(2.0 * np.pi * (x + y)))


def _vortex_init_factory(model):
    gamma = model.gamma

    def init(x, y, t=0.0):
        xs = _wrap(x - t, -5.0, 10.0)
        ys = _wrap(y - t, -5.0, 10.0)
        k0 = (5.0 / (2.0 * np.pi)) * np.exp(0.5 * (1.0 - xs ** 2 - ys ** 2))
        t0 = 1.0 - (gamma - 1.0) / (2.0 * gamma) * k0 ** 2
        # isentropic relation; p = T0 rho then equals rho^gamma
        rho = t0 ** (1.0 / (gamma - 1.0))
        prim = _stack(rho, 1.0 + k0 * ys, 1.0 - k0 * xs, t0 * rho)
        return model.prim_to_cons(prim)

    return init


def _const_state(model, prim):
    state = model.prim_to_cons(np.asarray(prim, dtype=float))

    def fn(x, y, t):
        shape = np.broadcast(x, y).shape
        return np.broadcast_to(state, shape + (model.m,)).copy()

    return fn


def _dmr_state_factory(model):
    post = model.prim_to_cons(np.array(
        [8.0, 8.25 * np.cos(np.pi / 6.0), -8.25 * np.sin(np.pi / 6.0), 116.5]))
    pre = model.prim_to_cons(np.array([1.4, 0.0, 0.0, 1.0]))

    def fn(x, y, t):
        locus = 1.0 / 6.0 + (y + 20.0 * t) / _SQRT3
        mask = (np.broadcast_to(x, np.broadcast(x, y).shape)
                < np.broadcast_to(locus, np.broadcast(x, y).shape))
        return np.where(mask[..., None], post, pre)

    return fn


def _jet_inflow_factory(model, vjet):
    strip = model.prim_to_cons(np.array([5.0, vjet, 0.0, 0.4127]))
    ambient = model.prim_to_cons(np.array([0.5, 0.0, 0.0, 0.4127]))

    def fn(x, y, t):
        mask = np.broadcast_to(np.abs(y) < 0.05, np.broadcast(x, y).shape)
        return np.where(mask[..., None], strip, ambient)

    return fn


def _sedov_patch(grid, dofs):
    # the delta function is emulated through the centered cell average;
    # an even mesh has no centered cell, so the four central cells share
    # the same total injected energy
    g = grid.ghost
    e_tot = 0.979264
    ic = [g + (grid.n1 - 1) // 2, g + grid.n1 // 2]
    jc = [g + (grid.n2 - 1) // 2, g + grid.n2 // 2]
    cells = sorted({(i, j) for i in ic for j in jc})
    e_cell = e_tot / (len(cells) * grid.dx * grid.dy)
    for i, j in cells:
        dofs.avg[i, j, 3] = e_cell


# ---------------------------------------------------------------- registry

def _make_advection():
    per = Boundary("periodic")
    init = _advection_init
    return Problem(
        name="advection", model=Advection(speeds=(1.0, 1.0)),
        x0=0.0, x1=1.0, y0=0.0, y1=1.0, n1=100, n2=100, t_end=2.0,
        boundaries={"left": per, "right": per, "bottom": per, "top": per},
        init=init, bounds=(0.0, 1.0), avg_bp=True, point_bp=True,
        exact=lambda x, y, t: init(_wrap(x - t, 0.0, 1.0),
                                   _wrap(y - t, 0.0, 1.0)))


def _make_burgers():
    per = Boundary("periodic")
    return Problem(
        name="burgers", model=Burgers(),
        x0=0.0, x1=1.0, y0=0.0, y1=1.0, n1=100, n2=100, t_end=0.3,
        boundaries={"left": per, "right": per, "bottom": per, "top": per},
        init=_burgers_init, bounds=(-0.5, 1.5), avg_bp=True, point_bp=True,
        mp_mode="local")


def _make_vortex():
    model = Euler(gamma=1.4)
    per = Boundary("periodic")
    init = _vortex_init_factory(model)
    return Problem(
        name="vortex", model=model,
        x0=-5.0, x1=5.0, y0=-5.0, y1=5.0, n1=64, n2=64, t_end=10.0,
        boundaries={"left": per, "right": per, "bottom": per, "top": per},
        init=init, exact=init)


def _make_sod2d():
    model = Euler(gamma=1.4)
    left = model.prim_to_cons(np.array([1.0, 0.0, 0.0, 1.0]))
    right = model.prim_to_cons(np.array([0.125, 0.0, 0.0, 0.1]))

    def init(x, y):
        mask = np.broadcast_to(x < 0.5, np.broadcast(x, y).shape)
        return np.where(mask[..., None], left, right)

    per = Boundary("periodic")
    return Problem(
        name="sod2d", model=model,
        x0=0.0, x1=1.0, y0=0.0, y1=1.0, n1=100, n2=2, t_end=0.2,
        boundaries={"left": Boundary("outflow"), "right": Boundary("outflow"),
                    "bottom": per, "top": per},
        init=init, kappa=1.0, avg_bp=True, point_bp=True)


def _make_shock_reflection():
    model = Euler(gamma=1.4)
    inflow = _const_state(model, [1.0, 2.9, 0.0, 1.0 / 1.4])
    top = _const_state(model, [1.69997, 2.61934, -0.50632, 1.52819])

    def init(x, y):
        return inflow(x, y, 0.0)

    return Problem(
        name="shock_reflection", model=model,
        x0=0.0, x1=4.0, y0=0.0, y1=1.0, n1=120, n2=30, t_end=6.0,
        boundaries={"left": Boundary("dirichlet", inflow),
                    "right": Boundary("outflow"),
                    "bottom": Boundary("reflective"),
                    "top": Boundary("dirichlet", top)},
        init=init, kappa=0.5, avg_bp=True, point_bp=True)


def _make_sedov():
    model = Euler(gamma=1.4)
    ambient = np.array([1.0, 0.0, 0.0, 1e-12])

    def init(x, y):
        shape = np.broadcast(x, y).shape
        return np.broadcast_to(ambient, shape + (4,)).copy()

    out = Boundary("outflow")
    return Problem(
        name="sedov", model=model,
        x0=-1.1, x1=1.1, y0=-1.1, y1=1.1, n1=101, n2=101, t_end=1.0,
        boundaries={"left": out, "right": out, "bottom": out, "top": out},
        init=init, kappa=0.5, avg_bp=True, point_bp=True,
        patch_avg=_sedov_patch)


def _make_rp3():
    model = Euler(gamma=1.4)
    q = [model.prim_to_cons(np.array(p)) for p in (
        [1.5, 0.0, 0.0, 1.5],            # x > 0.8, y > 0.8
        [0.5323, 1.206, 0.0, 0.3],       # x < 0.8, y > 0.8
        [0.138, 1.206, 1.206, 0.029],    # x < 0.8, y < 0.8
        [0.5323, 0.0, 1.206, 0.3],       # x > 0.8, y < 0.8
    )]

    def init(x, y):
        xr = np.broadcast_to(x >= 0.8, np.broadcast(x, y).shape)
        yr = np.broadcast_to(y >= 0.8, np.broadcast(x, y).shape)
        out = np.where(xr[..., None],
                       np.where(yr[..., None], q[0], q[3]),
                       np.where(yr[..., None], q[1], q[2]))
        return out

    out_bc = Boundary("outflow")
    return Problem(
        name="rp3", model=model,
        x0=0.0, x1=1.0, y0=0.0, y1=1.0, n1=200, n2=200, t_end=0.8,
        boundaries={"left": out_bc, "right": out_bc,
                    "bottom": out_bc, "top": out_bc},
        init=init, kappa=0.5, avg_bp=True, point_bp=True)


def _make_dmr():
    model = Euler(gamma=1.4)
    shock = _dmr_state_factory(model)

    def init(x, y):
        return shock(x, y, 0.0)

    return Problem(
        name="dmr", model=model,
        x0=0.0, x1=3.0, y0=0.0, y1=1.0, n1=240, n2=80, t_end=0.2,
        boundaries={"left": Boundary("dirichlet", shock),
                    "right": Boundary("outflow"),
                    "bottom": Boundary("dmr_bottom", shock),
                    "top": Boundary("dirichlet", shock)},
        init=init, kappa=1.0, avg_bp=True, point_bp=True)


def _make_jet(name, domain, vjet, t_end, kappa):
    model = Euler(gamma=5.0 / 3.0)
    ambient = model.prim_to_cons(np.array([0.5, 0.0, 0.0, 0.4127]))
    inflow = _jet_inflow_factory(model, vjet)

    def init(x, y):
        shape = np.broadcast(x, y).shape
        return np.broadcast_to(ambient, shape + (4,)).copy()

    out = Boundary("outflow")
    x0, x1, y0, y1 = domain
    return Problem(
        name=name, model=model,
        x0=x0, x1=x1, y0=y0, y1=y1, n1=200, n2=100, t_end=t_end,
        boundaries={"left": Boundary("dirichlet", inflow), "right": out,
                    "bottom": out, "top": out},
        init=init, kappa=kappa, avg_bp=True, point_bp=True)


_REGISTRY = {
    "advection": _make_advection,
    "burgers": _make_burgers,
    "vortex": _make_vortex,
    "sod2d": _make_sod2d,
    "shock_reflection": _make_shock_reflection,
    "sedov": _make_sedov,
    "rp3": _make_rp3,
    "dmr": _make_dmr,
    "jet80": lambda: _make_jet("jet80", (0.0, 2.0, -0.5, 0.5), 30.0,
                               0.07, 1.0),
    "jet2000": lambda: _make_jet("jet2000", (0.0, 1.0, -0.25, 0.25), 800.0,
                                 0.001, 10.0),
}


def problem_names():
    return sorted(_REGISTRY)


def make_problem(name, **overrides):
    if name not in _REGISTRY:
        raise ConfigError(f"unknown problem '{name}'; "
                          f"known: {', '.join(problem_names())}")
    prob = _REGISTRY[name]()
    bad = set(overrides) - {"n1", "n2", "t_end", "kappa", "avg_bp",
                            "point_bp", "mp_mode"}
    if bad:
        raise ConfigError(f"cannot override field(s): {', '.join(sorted(bad))}")
    return dataclasses.replace(
        prob, **{k: v for k, v in overrides.items() if v is not None})


# ---------------------------------------------------------------- init

_SIMPSON_W = np.array([1.0, 4.0, 1.0]) / 6.0


def cell_average_field(fn, grid, m):
    """Per-cell 3x3 tensor Simpson averages of fn over the full avg array."""
    xc, yc = grid.xcenters(), grid.ycenters()
    acc = np.zeros((xc.size, yc.size, m))
    for p in range(3):
        for q in range(3):
            acc += (_SIMPSON_W[p] * _SIMPSON_W[q]
                    * fn(xc[:, None] + (p - 1) * grid.dx / 2,
                         yc[None, :] + (q - 1) * grid.dy / 2))
    return acc


def init_dofs(problem, grid):
    model = problem.model
    dofs = allocate_dofs(grid, model.m)
    xf, yf = grid.xfaces(), grid.yfaces()
    xc, yc = grid.xcenters(), grid.ycenters()
    dofs.node[...] = problem.init(xf[:, None], yf[None, :])
    dofs.facex[...] = problem.init(xf[:, None], yc[None, :])
    dofs.facey[...] = problem.init(xc[:, None], yf[None, :])
    dofs.avg[...] = cell_average_field(problem.init, grid, model.m)
    if problem.patch_avg is not None:
        problem.patch_avg(grid, dofs)
    for fam in ("avg", "facex", "facey", "node"):
        if not bool(model.is_admissible(dofs.array(fam)).all()):
            raise ConfigError(
                f"initial data inadmissible in family '{fam}'")
    return dofs


# ---------------------------------------------------------------- ghost fill

def _reflect(model, states, axis):
    out = states.copy()
    if model.m > 1:
        out[..., 1 + axis] = -out[..., 1 + axis]
    return out


def _fill_low(model, a, on_face, n, g, bc, coords, t, axis):
    # a is oriented so the boundary axis is axis 0 and low side is index 0;
    # coords = (normal ghost/pin coordinates fn, tangential coordinates)
    if bc.kind == "outflow":
        a[:g] = a[g][None]
    elif bc.kind == "reflective":
        if on_face:
            for k in range(1, g + 1):
                a[g - k] = _reflect(model, a[g + k], axis)
        else:
            for k in range(g):
                a[g - 1 - k] = _reflect(model, a[g + k], axis)
    elif bc.kind in ("dirichlet", "dmr_bottom"):
        if bc.kind == "dmr_bottom":
            _fill_low(model, a, on_face, n, g, Boundary("reflective"),
                      coords, t, axis)
        normal, tang = coords
        cols = list(range(g)) + ([g] if on_face else [])
        for c in cols:
            state = _side_state(bc.state, normal[c], tang, t, axis)
            if bc.kind == "dmr_bottom":
                x = tang if axis == 1 else np.full_like(tang, normal[c])
                mask = (x < 1.0 / 6.0)
                a[c] = np.where(mask[:, None], state, a[c])
            else:
                a[c] = state
    else:
        raise ConfigError(f"unknown boundary kind '{bc.kind}'")


def _fill_high(model, a, on_face, n, g, bc, coords, t, axis):
    top = g + n
    if bc.kind == "outflow":
        last = top if on_face else top - 1
        a[last + 1:] = a[last][None]
    elif bc.kind == "reflective":
        if on_face:
            for k in range(1, g + 1):
                a[top + k] = _reflect(model, a[top - k], axis)
        else:
            for k in range(g):
                a[top + k] = _reflect(model, a[top - 1 - k], axis)
    elif bc.kind == "dirichlet":
        normal, tang = coords
        cols = list(range(top + 1, top + 1 + g)) if on_face else \
            list(range(top, top + g))
        if on_face:
            cols = [top] + cols
        for c in cols:
            a[c] = _side_state(bc.state, normal[c], tang, t, axis)
    else:
        raise ConfigError(f"unknown boundary kind '{bc.kind}'")


def _side_state(state_fn, ncoord, tang, t, axis):
    if axis == 0:
        return state_fn(np.full_like(tang, ncoord), tang, t)
    return state_fn(tang, np.full_like(tang, ncoord), t)


def _fill_periodic(a, on_face, n, g):
    if on_face:
        a[g + n] = a[g]
        a[:g] = a[n:n + g]
        a[g + n + 1:] = a[g + 1:g + 1 + g]
    else:
        a[:g] = a[n:n + g]
        a[g + n:] = a[g:g + g]


def fill_ghosts(problem, dofs, t):
    """Populate all ghost DoFs for stage time t (two-pass, x then y)."""
    model = problem.model
    grid = dofs.grid
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    bcs = problem.boundaries
    if (bcs["left"].kind == "periodic") != (bcs["right"].kind == "periodic"):
        raise ConfigError("periodic boundaries must pair up in x")
    if (bcs["bottom"].kind == "periodic") != (bcs["top"].kind == "periodic"):
        raise ConfigError("periodic boundaries must pair up in y")

    xf, yf = grid.xfaces(), grid.yfaces()
    xc, yc = grid.xcenters(), grid.ycenters()

    for fam in ("avg", "facex", "facey", "node"):
        arr = dofs.array(fam)
        face_x = fam in ("facex", "node")
        face_y = fam in ("facey", "node")
        ny = n2 + 1 if face_y else n2
        # pass 1: x sides over interior rows
        a = arr[:, g:g + ny]
        tang = yf[g:g + ny] if face_y else yc[g:g + ny]
        normal = xf if face_x else xc
        if bcs["left"].kind == "periodic":
            _fill_periodic(a, face_x, n1, g)
        else:
            _fill_low(model, a, face_x, n1, g, bcs["left"],
                      (normal, tang), t, 0)
            _fill_high(model, a, face_x, n1, g, bcs["right"],
                       (normal, tang), t, 0)
        # pass 2: y sides over the full width
        a = arr.swapaxes(0, 1)
        tang = xf if face_x else xc
        normal = yf if face_y else yc
        if bcs["bottom"].kind == "periodic":
            _fill_periodic(a, face_y, n2, g)
        else:
            _fill_low(model, a, face_y, n2, g, bcs["bottom"],
                      (normal, tang), t, 1)
            _fill_high(model, a, face_y, n2, g, bcs["top"],
                       (normal, tang), t, 1)
    return dofs


# ---------------------------------------------------------------- norms

def error_norms(problem, grid, dofs, t):
    """Per-component l1 norms of the averages against exact cell averages."""
    if problem.exact is None:
        raise ConfigError(f"problem '{problem.name}' has no exact solution")
    exact = cell_average_field(lambda x, y: problem.exact(x, y, t),
                               grid, problem.model.m)
    diff = np.abs(dofs.avg[grid.interior("avg")] - exact[grid.interior("avg")])
    return diff.sum(axis=(0, 1)) * grid.dx * grid.dy


def total_average(grid, dofs):
    """Domain integrals of the conserved averages, for conservation checks."""
    return dofs.avg[grid.interior("avg")].sum(axis=(0, 1)) * grid.dx * grid.dy
