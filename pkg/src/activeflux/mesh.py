"""Cartesian grid and degree-of-freedom storage.

The active flux method evolves four families of unknowns: cell averages,
point values at the centers of vertical (x-normal) faces, point values at
the centers of horizontal (y-normal) faces, and point values at cell
corners. A point value on an interior face or corner is shared by the
adjacent cells and stored exactly once, which keeps the reconstruction
globally continuous. Every family carries a ghost frame of width ``ghost``
on all sides; the default width 2 covers the one-sided point stencils plus
one extra layer for the shock sensor's cell-centered differences.

State arrays have shape (nx, ny, m) with the conserved components on the
trailing axis (m = 1 for scalar equations, 4 for the Euler equations).
"""

from dataclasses import dataclass

import numpy as np

FAMILIES = ("avg", "facex", "facey", "node")


@dataclass(frozen=True)
class Grid:
    """Uniform Cartesian mesh of n1 x n2 cells on [x0, x1] x [y0, y1]."""

    x0: float
    x1: float
    y0: float
    y1: float
    n1: int
    n2: int
    ghost: int
    dx: float
    dy: float

    def xcenters(self):
        """Cell-center x coordinates for all columns, ghosts included."""
        g = self.ghost
        return self.x0 + (np.arange(self.n1 + 2 * g) - g + 0.5) * self.dx

    def xfaces(self):
        """Vertical-face x coordinates for all columns, ghosts included."""
        g = self.ghost
        return self.x0 + (np.arange(self.n1 + 1 + 2 * g) - g) * self.dx

    def ycenters(self):
        g = self.ghost
        return self.y0 + (np.arange(self.n2 + 2 * g) - g + 0.5) * self.dy

    def yfaces(self):
        g = self.ghost
        return self.y0 + (np.arange(self.n2 + 1 + 2 * g) - g) * self.dy

    def coords(self, family):
        """1D coordinate arrays (x, y) for one DoF family, ghosts included."""
        if family == "avg":
            return self.xcenters(), self.ycenters()
        if family == "facex":
            return self.xfaces(), self.ycenters()
        if family == "facey":
            return self.xcenters(), self.yfaces()
        if family == "node":
            return self.xfaces(), self.yfaces()
        raise ValueError(f"unknown DoF family {family!r}")

    def shape(self, family):
        """Ghost-extended array shape (nx, ny) of one DoF family."""
        g2 = 2 * self.ghost
        nx = self.n1 + g2 + (0 if family in ("avg", "facey") else 1)
        ny = self.n2 + g2 + (0 if family in ("avg", "facex") else 1)
        return nx, ny

    def interior(self, family):
        """Index tuple selecting the interior (non-ghost) part of a family."""
        g = self.ghost
        sx = slice(g, g + self.n1 + (0 if family in ("avg", "facey") else 1))
        sy = slice(g, g + self.n2 + (0 if family in ("avg", "facex") else 1))
        return sx, sy


def build_grid(x0, x1, y0, y1, n1, n2, ghost=2):
    """Construct a uniform grid; extents must be increasing, counts positive.

    A ghost width below 2 cannot feed the point-value stencils and the
    shock sensor and is rejected.
    """
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"inverted or empty extents: [{x0}, {x1}] x [{y0}, {y1}]")
    if n1 < 1 or n2 < 1:
        raise ValueError(f"cell counts must be positive, got {n1} x {n2}")
    if ghost < 2:
        raise ValueError(f"ghost width must be at least 2, got {ghost}")
    dx = (x1 - x0) / n1
    dy = (y1 - y0) / n2
    return Grid(x0, x1, y0, y1, int(n1), int(n2), int(ghost), dx, dy)


@dataclass
class DofField:
    """The four DoF arrays of one solution state on a grid.

    Arrays are ghost-extended; ghost entries are owned by the boundary
    filling step and carry no meaning in between.
    """

    grid: Grid
    m: int
    avg: np.ndarray
    facex: np.ndarray
    facey: np.ndarray
    node: np.ndarray

    def array(self, family):
        return getattr(self, family)

    def interior(self, family):
        """View of the interior part of one family."""
        return self.array(family)[self.grid.interior(family)]

    def copy(self):
        return DofField(self.grid, self.m, self.avg.copy(), self.facex.copy(),
                        self.facey.copy(), self.node.copy())

    def point_families(self):
        """The three point-value families as (name, array) pairs."""
        return (("facex", self.facex), ("facey", self.facey), ("node", self.node))


def allocate_dofs(grid, m):
    """Zero-initialized DofField with m conserved components."""
    if m < 1:
        raise ValueError(f"component count must be positive, got {m}")
    arrays = {f: np.zeros(grid.shape(f) + (m,)) for f in FAMILIES}
    return DofField(grid, int(m), arrays["avg"], arrays["facex"],
                    arrays["facey"], arrays["node"])


def lincomb(ca, a, cb, b):
    """Elementwise ca*a + cb*b over all four families (RK stage mixing)."""
    return DofField(a.grid, a.m,
                    ca * a.avg + cb * b.avg,
                    ca * a.facex + cb * b.facex,
                    ca * a.facey + cb * b.facey,
                    ca * a.node + cb * b.node)
