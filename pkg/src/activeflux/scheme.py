"""High-order residuals of the active flux scheme.

Cell averages evolve in flux form. The flux through a face is the Simpson
rule over the two corner nodes and the face midpoint,

    Fhat = (F(node) + 4 F(face) + F(node')) / 6,

which integrates the continuous reconstruction along the face to the
order of the scheme.

Point values evolve in advective form through flux-vector splittings.
Each direction uses one-sided three-point derivatives on a half-spaced
stencil,

    (D+ f)(x) = (f(x - h) - 4 f(x - h/2) + 3 f(x)) / h
    (D- f)(x) = (-3 f(x) + 4 f(x + h/2) - f(x + h)) / h,

applied to F+ and F- respectively, so that each split flux is
differenced into the side its waves come from. Along a row of constant
y the stencil alternates between nodes and y-face points; along a row
of constant x it alternates between nodes and x-face points. Stencils
through face midpoints alternate between face points and cell centers,
where the center value is reconstructed from the cell's averages and
boundary points (it is not an evolved unknown). Face points only
upwind their normal direction; the tangential derivative is a central
difference of the unsplit flux at the two adjacent nodes.

For the LLF splitting, F+- = (F +- alpha U) / 2 shares one alpha across
a stencil (the largest wave speed over its five states), so the two
one-sided derivatives combine into

    D+ F+ + D- F- = ((D+ F + D- F) + alpha (D+ U - D- U)) / 2,

which is what the vectorized kernel evaluates. Steger-Warming and van
Leer splittings need no alpha and difference their split tables directly.
"""

import numpy as np

from .equations import validate_splitting


def cell_center_reconstruct(ubar, uw, ue, us, un, usw, use, unw, une):
    """Center value of one cell from its average, face and node values."""
    return (36.0 * ubar - 4.0 * (uw + ue + us + un)
            - (usw + use + unw + une)) / 16.0


def cell_centers(model, dofs):
    """Reconstructed cell-center values, ghost cells included.

    The reconstruction can overshoot into inadmissible territory (negative
    density or pressure) next to strong shocks even when every evolved
    unknown is admissible. Such centers are replaced by their cell average
    before any flux or wave speed is evaluated on them; no evolved value
    is touched.
    """
    fx, fy, nd = dofs.facex, dofs.facey, dofs.node
    C = (36.0 * dofs.avg
         - 4.0 * (fx[:-1, :] + fx[1:, :] + fy[:, :-1] + fy[:, 1:])
         - (nd[:-1, :-1] + nd[1:, :-1] + nd[:-1, 1:] + nd[1:, 1:])) / 16.0
    if model.m > 1:
        bad = ~model.is_admissible(C)
        if bad.any():
            C = np.where(bad[..., None], dofs.avg, C)
    return C


def stencil_alpha(model, states, axis):
    """Largest wave speed over a collection of states (elementwise)."""
    it = iter(states)
    r = model.spectral_radius(next(it), axis)
    for s in it:
        r = np.maximum(r, model.spectral_radius(s, axis))
    return r


def simpson_flux(model, dofs):
    """High-order face fluxes for the average update.

    Returns (fhx, fhy) with shapes (n1+1, n2, m) and (n1, n2+1, m), one
    entry per interior face.
    """
    grid = dofs.grid
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    F1_nd = model.physical_flux(dofs.node, 0)
    F1_fx = model.physical_flux(dofs.facex, 0)
    F2_nd = model.physical_flux(dofs.node, 1)
    F2_fy = model.physical_flux(dofs.facey, 1)
    In = slice(g, g + n1 + 1)
    Jn = slice(g, g + n2 + 1)
    Ic = slice(g, g + n1)
    Jc = slice(g, g + n2)
    fhx = (F1_nd[In, Jc] + 4.0 * F1_fx[In, Jc]
           + F1_nd[In, slice(g + 1, g + n2 + 1)]) / 6.0
    fhy = (F2_nd[Ic, Jn] + 4.0 * F2_fy[Ic, Jn]
           + F2_nd[slice(g + 1, g + n1 + 1), Jn]) / 6.0
    return fhx, fhy


def average_residual(model, dofs, fluxes=None):
    """dUbar/dt on interior cells; pass precomputed Simpson fluxes to reuse."""
    grid = dofs.grid
    fhx, fhy = simpson_flux(model, dofs) if fluxes is None else fluxes
    return -(np.diff(fhx, axis=0) / grid.dx + np.diff(fhy, axis=1) / grid.dy)


def point_residuals(model, kind, dofs):
    """dU/dt at interior points: (node, facex, facey) arrays.

    Shapes are (n1+1, n2+1, m), (n1+1, n2, m) and (n1, n2+1, m). Ghost
    values of all four families must be current.
    """
    validate_splitting(model, kind)
    grid = dofs.grid
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    dx, dy = grid.dx, grid.dy
    nd, fx, fy = dofs.node, dofs.facex, dofs.facey
    C = cell_centers(model, dofs)

    # column slices over x-face indexed arrays: c1-1, c1, c1+1
    A1 = slice(g - 1, g + n1)
    B1 = slice(g, g + n1 + 1)
    C1 = slice(g + 1, g + n1 + 2)
    # row slices over y-face indexed arrays: c2-1, c2, c2+1
    A2 = slice(g - 1, g + n2)
    B2 = slice(g, g + n2 + 1)
    C2 = slice(g + 1, g + n2 + 2)
    Ic = slice(g, g + n1)   # cell columns
    Jc = slice(g, g + n2)   # cell rows

    F1_nd = model.physical_flux(nd, 0)
    F2_nd = model.physical_flux(nd, 1)

    if kind == "llf":
        F1_fy = model.physical_flux(fy, 0)
        F1_fx = model.physical_flux(fx, 0)
        F1_C = model.physical_flux(C, 0)
        F2_fx = model.physical_flux(fx, 1)
        F2_fy = model.physical_flux(fy, 1)
        F2_C = model.physical_flux(C, 1)
        r1_nd = model.spectral_radius(nd, 0)
        r1_fy = model.spectral_radius(fy, 0)
        r1_fx = model.spectral_radius(fx, 0)
        r1_C = model.spectral_radius(C, 0)
        r2_nd = model.spectral_radius(nd, 1)
        r2_fx = model.spectral_radius(fx, 1)
        r2_fy = model.spectral_radius(fy, 1)
        r2_C = model.spectral_radius(C, 1)

        def osx(F, Fi, U, Ui, a_out, a_in, J):
            # combined D+ F+ + D- F- with the stencil-max alpha
            al = np.maximum.reduce([a_out[A1, J], a_in[A1, J], a_out[B1, J],
                                    a_in[B1, J], a_out[C1, J]])
            dF = F[A1, J] - 4.0 * Fi[A1, J] + 4.0 * Fi[B1, J] - F[C1, J]
            dU = (U[A1, J] - 4.0 * Ui[A1, J] + 6.0 * U[B1, J]
                  - 4.0 * Ui[B1, J] + U[C1, J])
            return 0.5 * (dF + al[..., None] * dU) / dx

        def osy(F, Fi, U, Ui, a_out, a_in, I):
            al = np.maximum.reduce([a_out[I, A2], a_in[I, A2], a_out[I, B2],
                                    a_in[I, B2], a_out[I, C2]])
            dF = F[I, A2] - 4.0 * Fi[I, A2] + 4.0 * Fi[I, B2] - F[I, C2]
            dU = (U[I, A2] - 4.0 * Ui[I, A2] + 6.0 * U[I, B2]
                  - 4.0 * Ui[I, B2] + U[I, C2])
            return 0.5 * (dF + al[..., None] * dU) / dy

        xp_nd = osx(F1_nd, F1_fy, nd, fy, r1_nd, r1_fy, B2)
        yp_nd = osy(F2_nd, F2_fx, nd, fx, r2_nd, r2_fx, B1)
        xp_fx = osx(F1_fx, F1_C, fx, C, r1_fx, r1_C, Jc)
        yp_fy = osy(F2_fy, F2_C, fy, C, r2_fy, r2_C, Ic)
    else:
        F1p_nd, F1m_nd = model.fvs_split(kind, nd, 0)
        F1p_fy, F1m_fy = model.fvs_split(kind, fy, 0)
        F1p_fx, F1m_fx = model.fvs_split(kind, fx, 0)
        F1p_C, F1m_C = model.fvs_split(kind, C, 0)
        F2p_nd, F2m_nd = model.fvs_split(kind, nd, 1)
        F2p_fx, F2m_fx = model.fvs_split(kind, fx, 1)
        F2p_fy, F2m_fy = model.fvs_split(kind, fy, 1)
        F2p_C, F2m_C = model.fvs_split(kind, C, 1)

        def osx(Fp, Fpi, Fm, Fmi, J):
            return (Fp[A1, J] - 4.0 * Fpi[A1, J] + 3.0 * Fp[B1, J]
                    - 3.0 * Fm[B1, J] + 4.0 * Fmi[B1, J] - Fm[C1, J]) / dx

        def osy(Fp, Fpi, Fm, Fmi, I):
            return (Fp[I, A2] - 4.0 * Fpi[I, A2] + 3.0 * Fp[I, B2]
                    - 3.0 * Fm[I, B2] + 4.0 * Fmi[I, B2] - Fm[I, C2]) / dy

        xp_nd = osx(F1p_nd, F1p_fy, F1m_nd, F1m_fy, B2)
        yp_nd = osy(F2p_nd, F2p_fx, F2m_nd, F2m_fx, B1)
        xp_fx = osx(F1p_fx, F1p_C, F1m_fx, F1m_C, Jc)
        yp_fy = osy(F2p_fy, F2p_C, F2m_fy, F2m_C, Ic)

    # tangential central differences through the adjacent nodes
    yp_fx = (F2_nd[B1, slice(g + 1, g + n2 + 1)] - F2_nd[B1, Jc]) / dy
    xp_fy = (F1_nd[slice(g + 1, g + n1 + 1), B2] - F1_nd[Ic, B2]) / dx

    r_node = -(xp_nd + yp_nd)
    r_facex = -(xp_fx + yp_fx)
    r_facey = -(xp_fy + yp_fy)
    return r_node, r_facex, r_facey


# -- per-point reference implementations (tests and debugging) -------------


def _one_sided(model, kind, states, axis, h):
    """D+ F+ + D- F- on one five-state stencil with spacing h/2."""
    alpha = None
    if kind == "llf":
        alpha = stencil_alpha(model, states, axis)
    Fp, Fm = model.fvs_split(kind, states, axis, alpha=alpha)
    return ((Fp[0] - 4.0 * Fp[1] + 3.0 * Fp[2])
            + (-3.0 * Fm[2] + 4.0 * Fm[3] - Fm[4])) / h


def node_residual(model, kind, dofs, k, l):
    """dU/dt at the interior node with face indices (k, l)."""
    grid = dofs.grid
    g = grid.ghost
    c1, c2 = g + k, g + l
    nd, fx, fy = dofs.node, dofs.facex, dofs.facey
    xs = np.stack([nd[c1 - 1, c2], fy[c1 - 1, c2], nd[c1, c2],
                   fy[c1, c2], nd[c1 + 1, c2]])
    ys = np.stack([nd[c1, c2 - 1], fx[c1, c2 - 1], nd[c1, c2],
                   fx[c1, c2], nd[c1, c2 + 1]])
    return -(_one_sided(model, kind, xs, 0, grid.dx)
             + _one_sided(model, kind, ys, 1, grid.dy))


def facex_residual(model, kind, dofs, k, j):
    """dU/dt at the interior x-face point with face index k, cell row j."""
    grid = dofs.grid
    g = grid.ghost
    c1, c2 = g + k, g + j
    fx, nd = dofs.facex, dofs.node
    C = cell_centers(model, dofs)
    xs = np.stack([fx[c1 - 1, c2], C[c1 - 1, c2], fx[c1, c2],
                   C[c1, c2], fx[c1 + 1, c2]])
    xp = _one_sided(model, kind, xs, 0, grid.dx)
    yp = (model.physical_flux(nd[c1, c2 + 1], 1)
          - model.physical_flux(nd[c1, c2], 1)) / grid.dy
    return -(xp + yp)


def facey_residual(model, kind, dofs, i, l):
    """dU/dt at the interior y-face point with cell column i, face index l."""
    grid = dofs.grid
    g = grid.ghost
    c1, c2 = g + i, g + l
    fy, nd = dofs.facey, dofs.node
    C = cell_centers(model, dofs)
    ys = np.stack([fy[c1, c2 - 1], C[c1, c2 - 1], fy[c1, c2],
                   C[c1, c2], fy[c1, c2 + 1]])
    yp = _one_sided(model, kind, ys, 1, grid.dy)
    xp = (model.physical_flux(nd[c1 + 1, c2], 0)
          - model.physical_flux(nd[c1, c2], 0)) / grid.dx
    return -(xp + yp)
