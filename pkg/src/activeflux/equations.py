"""Hyperbolic models and flux-vector splittings.

Three models share one interface: linear advection, Burgers' equation
(both scalar, with the same flux in x and y), and the 2D compressible
Euler equations. State arrays have the conserved components on the
trailing axis; Euler uses the ordering (rho, rho*v1, rho*v2, E) with
p = (gamma - 1) * (E - 0.5 * rho * |v|^2).

Point-value updates upwind through flux-vector splittings F = F+ + F-,
where the Jacobian of F+ (resp. F-) has nonnegative (resp. nonpositive)
eigenvalues:

* ``llf``: local Lax-Friedrichs splitting 0.5 * (F +- alpha * U) with a
  caller-provided bound alpha on the spectral radius over the stencil.
* ``sw``: Steger-Warming splitting from the eigenvalue decomposition of
  the Jacobian, with lambda+- = 0.5 * (lambda +- |lambda|) and no entropy
  fix. For scalar models it degenerates to 0.5 * (f +- |f'(u)| u).
* ``vh``: van Leer splitting of the Mach number with the enthalpy-based
  energy flux (Haenel's variant), Euler only. Supersonic states use the
  one-sided branches F+ = F, F- = 0 (mirrored); the cubic pressure split
  0.25 * p * (M +- 1)^2 * (2 -+ M) keeps every component C^1 across
  |M| = 1, which the third-order point stencils need on transonic flows.

The y-direction splittings follow from rotational invariancy: swap the
velocity components, split in x, swap back.
"""

import numpy as np

from .errors import NumericalStateError

SPLITTINGS = ("llf", "sw", "vh")

_SWAP = (0, 2, 1, 3)


def validate_splitting(model, kind):
    """Reject unknown splitting names and VH on scalar models."""
    if kind not in SPLITTINGS:
        raise ValueError(f"unknown splitting kind {kind!r}, expected one of {SPLITTINGS}")
    if kind == "vh" and model.m == 1:
        raise ValueError("the van Leer-Haenel splitting is only defined for the Euler equations")


def _expand_alpha(alpha, U):
    al = np.asarray(alpha)
    if al.ndim == U.ndim - 1:
        al = al[..., None]
    return al


class Advection:
    """u_t + c1 u_x + c2 u_y = 0."""

    m = 1

    def __init__(self, speeds=(1.0, 1.0)):
        self.speeds = (float(speeds[0]), float(speeds[1]))

    def physical_flux(self, U, axis):
        return self.speeds[axis] * U

    def spectral_radius(self, U, axis):
        return np.full(U.shape[:-1], abs(self.speeds[axis]))

    def fvs_split(self, kind, U, axis, alpha=None):
        validate_splitting(self, kind)
        F = self.physical_flux(U, axis)
        if kind == "llf":
            if alpha is None:
                raise ValueError("the LLF splitting needs a stencil wave-speed bound")
            al = _expand_alpha(alpha, U)
            return 0.5 * (F + al * U), 0.5 * (F - al * U)
        c = abs(self.speeds[axis])
        return 0.5 * (F + c * U), 0.5 * (F - c * U)

    def is_admissible(self, U, eps=0.0):
        return np.isfinite(U).all(axis=-1)


class Burgers:
    """u_t + (u^2/2)_x + (u^2/2)_y = 0."""

    m = 1

    def physical_flux(self, U, axis):
        return 0.5 * U * U

    def spectral_radius(self, U, axis):
        return np.abs(U[..., 0])

    def fvs_split(self, kind, U, axis, alpha=None):
        validate_splitting(self, kind)
        F = self.physical_flux(U, axis)
        if kind == "llf":
            if alpha is None:
                raise ValueError("the LLF splitting needs a stencil wave-speed bound")
            al = _expand_alpha(alpha, U)
        else:
            al = np.abs(U)
        return 0.5 * (F + al * U), 0.5 * (F - al * U)

    def is_admissible(self, U, eps=0.0):
        return np.isfinite(U).all(axis=-1)


class Euler:
    """2D compressible Euler equations for a perfect gas."""

    m = 4

    def __init__(self, gamma=1.4):
        if gamma <= 1.0:
            raise ValueError(f"gamma must exceed 1, got {gamma}")
        self.gamma = float(gamma)

    # -- state conversions ------------------------------------------------

    def pressure(self, U):
        """p from conservative state, purely algebraic (may be negative)."""
        rho = U[..., 0]
        kin = 0.5 * (U[..., 1] ** 2 + U[..., 2] ** 2) / rho
        return (self.gamma - 1.0) * (U[..., 3] - kin)

    def cons_to_prim(self, U):
        """(rho, rho v, E) -> (rho, v, p); rejects nonpositive density."""
        rho = U[..., 0]
        if np.any(~(rho > 0.0)):
            raise NumericalStateError("nonpositive density in primitive conversion")
        P = np.empty_like(U)
        P[..., 0] = rho
        P[..., 1] = U[..., 1] / rho
        P[..., 2] = U[..., 2] / rho
        P[..., 3] = self.pressure(U)
        return P

    def prim_to_cons(self, P):
        U = np.empty_like(np.asarray(P, dtype=float))
        rho, v1, v2, p = P[..., 0], P[..., 1], P[..., 2], P[..., 3]
        U[..., 0] = rho
        U[..., 1] = rho * v1
        U[..., 2] = rho * v2
        U[..., 3] = p / (self.gamma - 1.0) + 0.5 * rho * (v1 * v1 + v2 * v2)
        return U

    def sound_speed(self, U):
        return np.sqrt(self.gamma * self.pressure(U) / U[..., 0])

    # -- fluxes and wave speeds -------------------------------------------

    def physical_flux(self, U, axis):
        rho = U[..., 0]
        vn = U[..., axis + 1] / rho
        p = self.pressure(U)
        F = np.empty_like(U)
        F[..., 0] = U[..., axis + 1]
        F[..., 1] = U[..., 1] * vn
        F[..., 2] = U[..., 2] * vn
        F[..., axis + 1] += p
        F[..., 3] = (U[..., 3] + p) * vn
        return F

    def spectral_radius(self, U, axis):
        """|v_axis| + a; rejects states outside the admissible set."""
        rho = U[..., 0]
        p = self.pressure(U)
        if np.any(~(rho > 0.0)) or np.any(~(p > 0.0)):
            raise NumericalStateError("inadmissible state in wave-speed evaluation")
        return np.abs(U[..., axis + 1] / rho) + np.sqrt(self.gamma * p / rho)

    def is_admissible(self, U, eps=0.0):
        """Positivity of density and pressure; NaN states are inadmissible."""
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            ok = (U[..., 0] > eps) & np.isfinite(U).all(axis=-1)
            p = self.pressure(np.where(ok[..., None], U, 1.0))
        return ok & (p > eps)

    # -- flux-vector splittings -------------------------------------------

    def fvs_split(self, kind, U, axis, alpha=None):
        validate_splitting(self, kind)
        if kind == "llf":
            if alpha is None:
                raise ValueError("the LLF splitting needs a stencil wave-speed bound")
            F = self.physical_flux(U, axis)
            al = _expand_alpha(alpha, U)
            return 0.5 * (F + al * U), 0.5 * (F - al * U)
        if axis == 1:
            Us = U[..., _SWAP]
            Fp, Fm = self.fvs_split(kind, Us, 0)
            return Fp[..., _SWAP], Fm[..., _SWAP]
        if kind == "sw":
            return self._steger_warming_x(U)
        return self._van_leer_haenel_x(U)

    def _steger_warming_x(self, U):
        g = self.gamma
        rho = U[..., 0]
        v1 = U[..., 1] / rho
        v2 = U[..., 2] / rho
        p = self.pressure(U)
        a = np.sqrt(g * p / rho)
        lam = (v1, v1 + a, v1 - a)
        out = []
        for sgn in (1.0, -1.0):
            l1, l2, l3 = (0.5 * (l + sgn * np.abs(l)) for l in lam)
            apm = 2.0 * (g - 1.0) * l1 + l2 + l3
            w = rho / (2.0 * g)
            F = np.empty_like(U)
            F[..., 0] = w * apm
            F[..., 1] = w * (apm * v1 + a * (l2 - l3))
            F[..., 2] = w * apm * v2
            F[..., 3] = w * (0.5 * apm * (v1 * v1 + v2 * v2)
                             + a * v1 * (l2 - l3)
                             + a * a * (l2 + l3) / (g - 1.0))
            out.append(F)
        return out[0], out[1]

    def _van_leer_haenel_x(self, U):
        g = self.gamma
        rho = U[..., 0]
        v1 = U[..., 1] / rho
        v2 = U[..., 2] / rho
        p = self.pressure(U)
        a = np.sqrt(g * p / rho)
        H = (U[..., 3] + p) / rho
        with np.errstate(divide="ignore", invalid="ignore"):
            M = v1 / a
        M = np.where(np.isfinite(M), M, np.sign(v1) * 2.0)
        Mc = np.clip(M, -1.0, 1.0)

        # subsonic branch, evaluated at the clipped Mach number
        mp = 0.25 * rho * a * (Mc + 1.0) ** 2
        mm = -0.25 * rho * a * (Mc - 1.0) ** 2
        pp = 0.25 * p * (Mc + 1.0) ** 2 * (2.0 - Mc)
        pm = 0.25 * p * (Mc - 1.0) ** 2 * (2.0 + Mc)
        Fp = np.stack([mp, mp * v1 + pp, mp * v2, mp * H], axis=-1)
        Fm = np.stack([mm, mm * v1 + pm, mm * v2, mm * H], axis=-1)

        F = self.physical_flux(U, 0)
        sup = (M >= 1.0)[..., None]
        sub = (M <= -1.0)[..., None]
        Fp = np.where(sup, F, np.where(sub, 0.0, Fp))
        Fm = np.where(sup, 0.0, np.where(sub, F, Fm))
        return Fp, Fm


def component_names(model):
    if model.m == 1:
        return ["u"]
    return ["rho", "momx", "momy", "energy"]
