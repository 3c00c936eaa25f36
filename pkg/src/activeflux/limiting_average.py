"""Bound-preserving convex limiting of the average update.

The high-order Simpson face flux Fhat is blended with a first-order
local Lax-Friedrichs flux FL so that the updated cell averages stay in
the admissible set under the bound-preserving time step cap:

    Fhat_lim = FL + theta_s * theta * (Fhat - FL).

The antidiffusive part dF = Fhat - FL is limited through the face's
intermediate (bar) state

    Ut = (UL + UR)/2 + (F(UL) - F(UR)) / (2 alpha),

which is what each neighbor average sees from this face in the
first-order update. Keeping the shifted states Ut -+ dF/alpha
admissible keeps the full update admissible by convexity.

For scalar equations the antidiffusion is clipped against interval
bounds: either the global invariant interval of the initial data or a
local envelope of neighboring bar states and averages (a discrete
maximum principle). For the Euler equations a density clip is followed
by a pressure scaling theta, both against the positivity floor eps.

theta_s is a face blend factor from a shock sensor: the product of a
pressure-roughness factor per direction and a compression factor from
the velocity field of the cell averages, mapped through exp(-kappa *
phi1 * phi2). Smooth regions give theta_s = 1 and keep the scheme
unlimited there; kappa = 0 turns the factor into exactly 1.0, bitwise
equal to disabling the sensor.
"""

from dataclasses import dataclass

import numpy as np

from .scheme import simpson_flux

_TINY = 1e-300


@dataclass
class LimiterConfig:
    """Which limiting steps run and with what parameters.

    bounds is the scalar invariant interval (lo, hi); required when
    avg_bp or point_bp is on for a scalar model. mp_mode picks between
    "global" interval bounds and "local" envelope bounds for the scalar
    average limiter. eps is the Euler positivity floor. kappa scales the
    shock sensor; sensor=False skips it entirely.
    """

    avg_bp: bool = False
    point_bp: bool = False
    mp_mode: str = "global"
    bounds: tuple = None
    eps: float = 1e-13
    kappa: float = 0.0
    sensor: bool = True

    def __post_init__(self):
        if self.mp_mode not in ("global", "local"):
            raise ValueError(f"mp_mode must be 'global' or 'local', got {self.mp_mode!r}")
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")


def loworder_flux(model, UL, UR, axis):
    """First-order LLF face flux and the pairwise wave speed bound."""
    FL = model.physical_flux(UL, axis)
    FR = model.physical_flux(UR, axis)
    al = np.maximum(model.spectral_radius(UL, axis),
                    model.spectral_radius(UR, axis))
    return 0.5 * (FL + FR) - 0.5 * al[..., None] * (UR - UL), al


def intermediate_state(model, UL, UR, axis, alpha=None):
    """Bar state of the face: what both neighbors see of the LLF flux."""
    if alpha is None:
        alpha = np.maximum(model.spectral_radius(UL, axis),
                           model.spectral_radius(UR, axis))
    FL = model.physical_flux(UL, axis)
    FR = model.physical_flux(UR, axis)
    return 0.5 * (UL + UR) + (FL - FR) / np.maximum(2.0 * alpha[..., None], _TINY)


def limit_scalar_flux(dF, alpha, Ut, lo_l, hi_l, lo_r, hi_r):
    """Clip scalar antidiffusion so both shifted bar states stay in bounds.

    All arguments are plain arrays (no component axis). The caps are
    clamped to the correct sign so rounding near a bound cannot flip the
    direction of the antidiffusion.
    """
    pos = np.maximum(alpha * np.minimum(Ut - lo_l, hi_r - Ut), 0.0)
    neg = np.minimum(alpha * np.maximum(lo_r - Ut, Ut - hi_l), 0.0)
    return np.where(dF >= 0.0, np.minimum(dF, pos), np.maximum(dF, neg))


def limit_density(dF, alpha, Ut, eps):
    """Clip the density component of dF so shifted densities stay >= eps."""
    cap = np.maximum(alpha * (Ut[..., 0] - eps), 0.0)
    out = dF.copy()
    out[..., 0] = np.clip(dF[..., 0], -cap, cap)
    return out


def limit_pressure(dF, alpha, Ut, eps):
    """Scaling factor keeping internal energy of shifted states above eps.

    The quadratic form q(V) = V_rho V_E - |V_m|^2/2 - eps V_rho is
    positive on both Ut -+ theta dF / alpha whenever

        theta <= C / (max(0, A) + |B|),  theta <= 1,

    with C = alpha^2 q(Ut), B the linear and -A the quadratic coefficient
    of q along dF. q > 0 gives p > (gamma - 1) eps, so pressure stays
    positive. A nonpositive C (bar state itself at the floor) forces
    theta = 0; a vanishing denominator means the form cannot decrease
    and allows theta = 1.
    """
    A = 0.5 * (dF[..., 1] ** 2 + dF[..., 2] ** 2) - dF[..., 0] * dF[..., 3]
    B = alpha * (dF[..., 0] * Ut[..., 3] + Ut[..., 0] * dF[..., 3]
                 - dF[..., 1] * Ut[..., 1] - dF[..., 2] * Ut[..., 2]
                 - eps * dF[..., 0])
    C = alpha ** 2 * (Ut[..., 0] * Ut[..., 3]
                      - 0.5 * (Ut[..., 1] ** 2 + Ut[..., 2] ** 2)
                      - eps * Ut[..., 0])
    denom = np.maximum(A, 0.0) + np.abs(B)
    theta = np.where(denom < _TINY, 1.0,
                     np.minimum(1.0, C / np.maximum(denom, _TINY)))
    theta = np.where(C <= 0.0, 0.0, theta)
    return np.where(Ut[..., 0] <= eps, 0.0, theta)


def shock_sensor(model, avg, grid, kappa):
    """Face blend factors exp(-kappa * phi1 * phi2) for both face sets.

    phi1 measures pressure roughness (second difference over second sum,
    per direction), phi2 measures compression (negative part of the
    divergence of the average velocity, normalized against divergence
    plus curl). Each face takes the larger value of its two neighbor
    cells, factor by factor.
    """
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    P = model.pressure(avg)
    v1 = avg[..., 1] / avg[..., 0]
    v2 = avg[..., 2] / avg[..., 0]

    E = slice(g - 1, g + n1 + 1)    # cells -1 .. n1
    F = slice(g - 1, g + n2 + 1)    # cells -1 .. n2
    Ep = slice(g, g + n1 + 2)
    Em = slice(g - 2, g + n1)
    Fp = slice(g, g + n2 + 2)
    Fm = slice(g - 2, g + n2)

    phi1x = (np.abs(P[Ep, F] - 2.0 * P[E, F] + P[Em, F])
             / np.abs(P[Ep, F] + 2.0 * P[E, F] + P[Em, F]))
    phi1y = (np.abs(P[E, Fp] - 2.0 * P[E, F] + P[E, Fm])
             / np.abs(P[E, Fp] + 2.0 * P[E, F] + P[E, Fm]))
    div = ((v1[Ep, F] - v1[Em, F]) / (2.0 * grid.dx)
           + (v2[E, Fp] - v2[E, Fm]) / (2.0 * grid.dy))
    curl = ((v2[Ep, F] - v2[Em, F]) / (2.0 * grid.dx)
            - (v1[E, Fp] - v1[E, Fm]) / (2.0 * grid.dy))
    phi2 = np.maximum(-div / np.sqrt(div * div + curl * curl + 1e-40), 0.0)

    sx = np.exp(-kappa * np.maximum(phi1x[:-1, 1:-1], phi1x[1:, 1:-1])
                * np.maximum(phi2[:-1, 1:-1], phi2[1:, 1:-1]))
    sy = np.exp(-kappa * np.maximum(phi1y[1:-1, :-1], phi1y[1:-1, 1:])
                * np.maximum(phi2[1:-1, :-1], phi2[1:-1, 1:]))
    return sx, sy


def _scalar_local_bounds(model, avg, grid):
    """Envelope bounds per cell over one ghost ring: the cell's own
    average and the bar states of its four faces, in both axes."""
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    # extended x-face bar states: faces -1 .. n1+1, cell rows -1 .. n2
    L = avg[g - 2:g + n1 + 1, g - 1:g + n2 + 1]
    R = avg[g - 1:g + n1 + 2, g - 1:g + n2 + 1]
    utx = intermediate_state(model, L, R, 0)[..., 0]
    # extended y-face bar states: cells -1 .. n1, faces -1 .. n2+1
    B = avg[g - 1:g + n1 + 1, g - 2:g + n2 + 1]
    T = avg[g - 1:g + n1 + 1, g - 1:g + n2 + 2]
    uty = intermediate_state(model, B, T, 1)[..., 0]
    cells = avg[g - 1:g + n1 + 1, g - 1:g + n2 + 1, 0]
    lo = np.minimum.reduce([cells, utx[:-1], utx[1:], uty[:, :-1], uty[:, 1:]])
    hi = np.maximum.reduce([cells, utx[:-1], utx[1:], uty[:, :-1], uty[:, 1:]])
    return lo, hi


def limited_average_update(model, cfg, dofs, dt, fluxes=None):
    """One forward Euler step of the interior averages with limiting.

    Returns (new interior averages, diagnostics). The diagnostics carry
    the per-face blend factors actually applied (theta_x, theta_y), the
    sensor factors, and their summary statistics.
    """
    grid = dofs.grid
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    fhx, fhy = simpson_flux(model, dofs) if fluxes is None else fluxes
    avg_int = dofs.avg[g:g + n1, g:g + n2]

    if model.m > 1 and cfg.sensor:
        sx, sy = shock_sensor(model, dofs.avg, grid, cfg.kappa)
    else:
        sx = np.ones((n1 + 1, n2))
        sy = np.ones((n1, n2 + 1))

    if not cfg.avg_bp and np.all(sx == 1.0) and np.all(sy == 1.0):
        flux_x, flux_y = fhx, fhy
        thx, thy = sx, sy
    else:
        ULx = dofs.avg[g - 1:g + n1, g:g + n2]
        URx = dofs.avg[g:g + n1 + 1, g:g + n2]
        ULy = dofs.avg[g:g + n1, g - 1:g + n2]
        URy = dofs.avg[g:g + n1, g:g + n2 + 1]
        flx, alx = loworder_flux(model, ULx, URx, 0)
        fly, aly = loworder_flux(model, ULy, URy, 1)
        utx = intermediate_state(model, ULx, URx, 0, alpha=alx)
        uty = intermediate_state(model, ULy, URy, 1, alpha=aly)
        dFx = fhx - flx
        dFy = fhy - fly

        if not cfg.avg_bp:
            thx, thy = sx, sy
            flux_x = flx + sx[..., None] * dFx
            flux_y = fly + sy[..., None] * dFy
        elif model.m == 1:
            if cfg.mp_mode == "local":
                lo, hi = _scalar_local_bounds(model, dofs.avg, grid)
                lim_x = limit_scalar_flux(dFx[..., 0], alx, utx[..., 0],
                                          lo[:-1, 1:-1], hi[:-1, 1:-1],
                                          lo[1:, 1:-1], hi[1:, 1:-1])
                lim_y = limit_scalar_flux(dFy[..., 0], aly, uty[..., 0],
                                          lo[1:-1, :-1], hi[1:-1, :-1],
                                          lo[1:-1, 1:], hi[1:-1, 1:])
            else:
                if cfg.bounds is None:
                    raise ValueError("scalar average limiting needs cfg.bounds")
                lo, hi = cfg.bounds
                lim_x = limit_scalar_flux(dFx[..., 0], alx, utx[..., 0],
                                          lo, hi, lo, hi)
                lim_y = limit_scalar_flux(dFy[..., 0], aly, uty[..., 0],
                                          lo, hi, lo, hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                thx = np.where(dFx[..., 0] != 0.0, lim_x / dFx[..., 0], 1.0)
                thy = np.where(dFy[..., 0] != 0.0, lim_y / dFy[..., 0], 1.0)
            flux_x = flx + (sx * lim_x)[..., None]
            flux_y = fly + (sy * lim_y)[..., None]
        else:
            dFx = limit_density(dFx, alx, utx, cfg.eps)
            dFy = limit_density(dFy, aly, uty, cfg.eps)
            thx = sx * limit_pressure(dFx, alx, utx, cfg.eps)
            thy = sy * limit_pressure(dFy, aly, uty, cfg.eps)
            flux_x = flx + thx[..., None] * dFx
            flux_y = fly + thy[..., None] * dFy

    avg_new = avg_int + dt * (-(np.diff(flux_x, axis=0)) / grid.dx
                              - np.diff(flux_y, axis=1) / grid.dy)
    nfaces = sx.size + sy.size
    diag = {
        "theta_x": thx,
        "theta_y": thy,
        "sensor_x": sx,
        "sensor_y": sy,
        "theta_min": float(min(thx.min(), thy.min())),
        "sensor_min": float(min(sx.min(), sy.min())),
        "sensor_frac": float(((sx < 0.999).sum() + (sy < 0.999).sum()) / nfaces),
    }
    return avg_new, diag
