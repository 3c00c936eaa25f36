"""Scaling limiters for the point-value updates.

Point values have no flux form, so bound preservation works by blending
the high-order update UH with a first-order LLF update UL of the same
point and picking the largest blend weight that keeps the result
admissible:

    U_lim = theta UH + (1 - theta) UL.

The low-order update couples each node to its four neighbor nodes and
each face point to its two neighbors across the cells plus the two
adjacent nodes in the transverse direction. Every coupling uses the
pairwise LLF flux, so under the bound-preserving time step cap UL is a
convex combination of admissible states and inherits their bounds.

For scalars, theta is chosen against the global invariant interval of
the initial data. For the Euler equations a density blend (density
component only) is followed by a pressure blend of the full state; the
concavity of the pressure in the conserved variables makes the second
blend sufficient.
"""

import numpy as np

from .errors import NumericalStateError
from .limiting_average import loworder_flux

_TINY = 1e-300


def llf_point_updates(model, dofs, dt):
    """First-order forward Euler states for (node, facex, facey) interiors."""
    grid = dofs.grid
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    rx, ry = dt / grid.dx, dt / grid.dy
    nd, fx, fy = dofs.node, dofs.facex, dofs.facey

    # nodes couple to neighbor nodes
    lx, _ = loworder_flux(model, nd[g - 1:g + n1 + 1, g:g + n2 + 1],
                          nd[g:g + n1 + 2, g:g + n2 + 1], 0)
    ly, _ = loworder_flux(model, nd[g:g + n1 + 1, g - 1:g + n2 + 1],
                          nd[g:g + n1 + 1, g:g + n2 + 2], 1)
    node_low = (nd[g:g + n1 + 1, g:g + n2 + 1]
                - rx * (lx[1:] - lx[:-1]) - ry * (ly[:, 1:] - ly[:, :-1]))

    # x-face points couple to x-face neighbors and the two nodes across
    U = fx[g:g + n1 + 1, g:g + n2]
    lx, _ = loworder_flux(model, fx[g - 1:g + n1 + 1, g:g + n2],
                          fx[g:g + n1 + 2, g:g + n2], 0)
    up, _ = loworder_flux(model, U, nd[g:g + n1 + 1, g + 1:g + n2 + 1], 1)
    dn, _ = loworder_flux(model, nd[g:g + n1 + 1, g:g + n2], U, 1)
    facex_low = U - rx * (lx[1:] - lx[:-1]) - ry * (up - dn)

    # y-face points, mirrored
    U = fy[g:g + n1, g:g + n2 + 1]
    ly, _ = loworder_flux(model, fy[g:g + n1, g - 1:g + n2 + 1],
                          fy[g:g + n1, g:g + n2 + 2], 1)
    rt, _ = loworder_flux(model, U, nd[g + 1:g + n1 + 1, g:g + n2 + 1], 0)
    lf, _ = loworder_flux(model, nd[g:g + n1, g:g + n2 + 1], U, 0)
    facey_low = U - ry * (ly[:, 1:] - ly[:, :-1]) - rx * (rt - lf)

    return node_low, facex_low, facey_low


def limit_point_scalar(UH, UL, bounds):
    """Largest blend of UH toward UL that stays inside the interval."""
    lo, hi = bounds
    uh = UH[..., 0]
    ul = UL[..., 0]
    d = np.abs(ul - uh)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        theta = np.minimum(np.abs(ul - lo) / d, np.abs(hi - ul) / d)
    theta = np.where(d < _TINY, 1.0, np.minimum(theta, 1.0))[..., None]
    return theta * UH + (1.0 - theta) * UL


def limit_point_euler(model, UH, UL, eps):
    """Density blend then pressure blend toward the low-order state.

    UL must be admissible; the low-order scheme guarantees that under the
    time step cap, so a violation here is an internal error, not a state
    to limit around.
    """
    rho_h = UH[..., 0]
    rho_l = UL[..., 0]
    if not bool(model.is_admissible(UL).all()):
        raise NumericalStateError(
            "low-order point update produced an inadmissible state")
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.clip((rho_l - eps) / (rho_l - rho_h), 0.0, 1.0)
    t1 = np.where(rho_h >= eps, 1.0,
                  np.where(np.abs(rho_l - rho_h) < _TINY, 1.0, t1))
    mid = UH.copy()
    mid[..., 0] = t1 * rho_h + (1.0 - t1) * rho_l

    p_mid = model.pressure(mid)
    p_low = model.pressure(UL)
    with np.errstate(divide="ignore", invalid="ignore"):
        t2 = np.clip((p_low - eps) / (p_low - p_mid), 0.0, 1.0)
    t2 = np.where(p_mid >= eps, 1.0,
                  np.where(np.abs(p_low - p_mid) < _TINY, 1.0, t2))[..., None]
    return t2 * mid + (1.0 - t2) * UL


def convexity_margin(model, dofs, dt):
    """Lower bound on the self-weight of the low-order point updates.

    The self-weight at a point is 1 - dt (aW + aE)/(2 dx) - dt (aS + aN)/(2 dy)
    with pairwise LLF speeds a. Bounding every a by the largest spectral
    radius over the three point families gives a conservative margin; the
    bound-preserving time step cap keeps it at one half or better.
    Nonnegative means convex combination. Diagnostic only.
    """
    r1 = 0.0
    r2 = 0.0
    for fam in ("node", "facex", "facey"):
        arr = dofs.array(fam)
        r1 = max(r1, float(model.spectral_radius(arr, 0).max()))
        r2 = max(r2, float(model.spectral_radius(arr, 1).max()))
    return 1.0 - dt * (r1 / dofs.grid.dx + r2 / dofs.grid.dy)
