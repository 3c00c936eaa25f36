"""Convex limiting of the average update.

The clip and scaling formulas are checked against hand-computable cases
and against their defining property on random data: every shifted bar
state Ut -+ theta dF / alpha must stay admissible. Full updates are
checked for conservation (telescoping of the limited fluxes) and for
the discrete bounds they are supposed to enforce.
"""

import numpy as np
import pytest

from activeflux.equations import Advection, Burgers, Euler
from activeflux.limiting_average import (LimiterConfig, _scalar_local_bounds,
                                         intermediate_state, limit_density,
                                         limit_pressure, limit_scalar_flux,
                                         limited_average_update, loworder_flux,
                                         shock_sensor)
from activeflux.mesh import allocate_dofs, build_grid
from activeflux.scheme import average_residual

from _util import fill_from_function

GAMMA = 1.4


def _wrap_axis(arr, g, n, on_faces):
    # arr is viewed with the wrapped direction on axis 0
    if on_faces:
        arr[g + n] = arr[g]  # the seam is stored twice
        arr[:g] = arr[n:n + g]
        arr[g + n + 1:] = arr[g + 1:2 * g + 1]
    else:
        arr[:g] = arr[n:n + g]
        arr[g + n:] = arr[g:2 * g]


def wrap_dofs(dofs):
    g = dofs.grid
    gh = g.ghost
    for fam, fx, fy in (("avg", False, False), ("facex", True, False),
                        ("facey", False, True), ("node", True, True)):
        arr = dofs.array(fam)
        _wrap_axis(arr, gh, g.n1, fx)
        _wrap_axis(arr.swapaxes(0, 1), gh, g.n2, fy)


def test_loworder_flux_is_upwind_for_advection():
    adv = Advection((1.0, 1.0))
    UL = np.array([[0.2]])
    UR = np.array([[0.8]])
    FL, al = loworder_flux(adv, UL, UR, 0)
    assert FL[0, 0] == pytest.approx(0.2)
    assert al[0] == 1.0
    # the bar state of an upwind flux is the left state itself
    ut = intermediate_state(adv, UL, UR, 0)
    assert ut[0, 0] == pytest.approx(0.2)


def test_scalar_clip():
    # positive antidiffusion capped by the tighter of the two bounds
    out = limit_scalar_flux(np.array(1.2), np.array(2.0), np.array(0.75),
                            0.0, 1.0, 0.0, 1.0)
    assert out == pytest.approx(0.5)
    out = limit_scalar_flux(np.array(-1.2), np.array(2.0), np.array(0.75),
                            0.0, 1.0, 0.0, 1.0)
    assert out == pytest.approx(-0.5)
    # bar state marginally outside the interval: cap clamps to zero
    out = limit_scalar_flux(np.array(0.3), np.array(1.0), np.array(-1e-17),
                            0.0, 1.0, 0.0, 1.0)
    assert out == 0.0
    # small antidiffusion passes through untouched
    out = limit_scalar_flux(np.array(0.1), np.array(2.0), np.array(0.75),
                            0.0, 1.0, 0.0, 1.0)
    assert out == pytest.approx(0.1)


def test_density_clip():
    dF = np.array([5.0, 1.0, 2.0, 3.0])
    ut = np.array([1.0 + 1e-13, 0.0, 0.0, 2.5])
    out = limit_density(dF, np.array(2.0), ut, 1e-13)
    np.testing.assert_allclose(out, [2.0, 1.0, 2.0, 3.0])
    out = limit_density(-dF, np.array(2.0), ut, 1e-13)
    np.testing.assert_allclose(out, [-2.0, -1.0, -2.0, -3.0])


def test_pressure_theta_guards():
    eps = 1e-13
    eu = Euler(GAMMA)
    ut = eu.prim_to_cons(np.array([1.0, 0.5, -0.2, 2.0]))
    # no antidiffusion: denominator vanishes, theta stays 1
    assert limit_pressure(np.zeros(4), np.array(1.0), ut, eps) == 1.0
    # bar state below the density floor
    low = np.array([eps / 2, 0.0, 0.0, 1.0])
    assert limit_pressure(np.ones(4), np.array(1.0), low, eps) == 0.0
    # bar state with internal energy below the floor: C < 0
    m = np.array([1.0, 0.3, -0.4, 0.0])
    m[3] = 0.5 * (m[1] ** 2 + m[2] ** 2) / m[0] + eps / 2
    assert limit_pressure(np.ones(4), np.array(1.0), m, eps) == 0.0


def test_pressure_limited_states_admissible():
    # defining property on random faces: both shifted bar states remain
    # strictly admissible after density clip and pressure scaling
    rng = np.random.default_rng(42)
    n = 20000
    eps = 1e-13
    eu = Euler(GAMMA)
    P = np.empty((n, 4))
    P[:, 0] = 10.0 ** rng.uniform(-8, 1, n)
    P[:, 1] = rng.uniform(-3, 3, n)
    P[:, 2] = rng.uniform(-3, 3, n)
    P[:, 3] = 10.0 ** rng.uniform(-8, 1, n)
    ut = eu.prim_to_cons(P)
    dF = rng.normal(0.0, 1.0, (n, 4)) * 10.0 ** rng.uniform(-2, 2, (n, 1))
    al = 10.0 ** rng.uniform(-1, 1, n)
    dF1 = limit_density(dF, al, ut, eps)
    th = limit_pressure(dF1, al, ut, eps)
    assert ((th >= 0.0) & (th <= 1.0)).all()
    for sgn in (1.0, -1.0):
        V = ut + sgn * th[:, None] * dF1 / al[:, None]
        assert (V[:, 0] > 0.0).all()
        assert (eu.pressure(V) > 0.0).all()


def test_scalar_clip_keeps_bar_states_in_bounds():
    rng = np.random.default_rng(7)
    n = 20000
    bu = Burgers()
    UL = rng.uniform(-1.0, 1.5, (n, 1))
    UR = rng.uniform(-1.0, 1.5, (n, 1))
    _, al = loworder_flux(bu, UL, UR, 0)
    al = np.maximum(al, 1e-8)
    ut = intermediate_state(bu, UL, UR, 0, alpha=al)[:, 0]
    lo = np.minimum(UL[:, 0], UR[:, 0])
    hi = np.maximum(UL[:, 0], UR[:, 0])
    # bar states of LLF always sit inside the pairwise interval
    assert (ut >= lo - 1e-12).all() and (ut <= hi + 1e-12).all()
    dF = rng.normal(0.0, 1.0, n)
    lim = limit_scalar_flux(dF, al, ut, lo, hi, lo, hi)
    for sgn in (1.0, -1.0):
        v = ut + sgn * lim / al
        assert (v >= lo - 1e-11).all() and (v <= hi + 1e-11).all()


def euler_sensor_field(grid, p_of_col):
    dofs = allocate_dofs(grid, 4)
    g = grid.ghost
    xc = grid.xcenters()
    for c in range(dofs.avg.shape[0]):
        p = p_of_col(c - g)
        v1 = -xc[c]
        dofs.avg[c, :, 0] = 1.0
        dofs.avg[c, :, 1] = v1
        dofs.avg[c, :, 2] = 0.0
        dofs.avg[c, :, 3] = p / (GAMMA - 1.0) + 0.5 * v1 * v1
    return dofs


def test_sensor_frozen_value():
    # pressure columns (1,1,1,2,1,1) and uniform compression: the face
    # between the p=1 and p=2 cells sees phi1 = 1/3, phi2 = 1
    g = build_grid(0.0, 6.0, 0.0, 4.0, 6, 4)
    dofs = euler_sensor_field(g, lambda i: 2.0 if i == 3 else 1.0)
    eu = Euler(GAMMA)
    sx, sy = shock_sensor(eu, dofs.avg, g, 1.0)
    assert sx[3, 0] == pytest.approx(np.exp(-1.0 / 3.0), abs=1e-15)
    assert sx[3, 0] == pytest.approx(0.7165313105737893, abs=1e-15)
    np.testing.assert_array_equal(sy, 1.0)  # pressure flat along y
    # kappa = 0 gives exactly ones
    sx0, sy0 = shock_sensor(eu, dofs.avg, g, 0.0)
    assert (sx0 == 1.0).all() and (sy0 == 1.0).all()


def test_unlimited_path_is_plain_residual():
    eu = Euler(GAMMA)
    g = build_grid(0.0, 1.0, 0.0, 1.0, 6, 5)
    dofs = fill_from_function(g, lambda x, y: (
        1.0 + 0.2 * np.sin(2 * np.pi * x), 0.3, -0.1,
        2.0 + 0.3 * np.cos(2 * np.pi * y)), 4)
    cfg = LimiterConfig(sensor=False)
    dt = 1e-3
    out, diag = limited_average_update(eu, cfg, dofs, dt)
    gi = g.ghost
    expect = dofs.avg[gi:gi + 6, gi:gi + 5] + dt * average_residual(eu, dofs)
    np.testing.assert_array_equal(out, expect)
    assert diag["theta_min"] == 1.0
    assert diag["sensor_frac"] == 0.0


def test_kappa_zero_matches_sensor_off_bitwise():
    eu = Euler(GAMMA)
    g = build_grid(0.0, 1.0, 0.0, 1.0, 8, 8)
    dofs = fill_from_function(g, lambda x, y: (
        1.0 + 0.5 * np.exp(-20 * ((x - 0.5) ** 2 + (y - 0.5) ** 2)),
        0.4 * np.sin(2 * np.pi * x), 0.1, 1.5), 4)
    wrap_dofs(dofs)
    dt = 1e-3
    out1, _ = limited_average_update(
        eu, LimiterConfig(avg_bp=True, sensor=True, kappa=0.0), dofs, dt)
    out2, _ = limited_average_update(
        eu, LimiterConfig(avg_bp=True, sensor=False), dofs, dt)
    np.testing.assert_array_equal(out1, out2)


@pytest.mark.parametrize("mp_mode", ["global", "local"])
def test_periodic_conservation_scalar(mp_mode):
    bu = Burgers()
    g = build_grid(0.0, 1.0, 0.0, 1.0, 12, 10)
    rng = np.random.default_rng(3)
    dofs = allocate_dofs(g, 1)
    dofs.avg[...] = rng.uniform(-0.5, 1.5, dofs.avg.shape)
    for fam in ("facex", "facey", "node"):
        arr = dofs.array(fam)
        arr[...] = rng.uniform(-0.5, 1.5, arr.shape)
    wrap_dofs(dofs)
    cfg = LimiterConfig(avg_bp=True, mp_mode=mp_mode, bounds=(-0.5, 1.5))
    dt = 1e-3
    out, _ = limited_average_update(bu, cfg, dofs, dt)
    gi = g.ghost
    before = dofs.avg[gi:gi + 12, gi:gi + 10].sum()
    np.testing.assert_allclose(out.sum(), before, rtol=1e-13)


def test_periodic_conservation_euler():
    eu = Euler(GAMMA)
    g = build_grid(0.0, 1.0, 0.0, 1.0, 10, 10)

    def field(x, y):
        rho = 1.0 + 0.4 * np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y)
        v1 = 0.5 * np.cos(2 * np.pi * x)
        v2 = -0.5 * np.sin(2 * np.pi * y)
        p = 2.0 + 0.5 * np.cos(2 * np.pi * (x + y))
        return eu.prim_to_cons(np.stack([rho, v1, v2, p], axis=-1))

    dofs = fill_from_function(g, field, 4)
    wrap_dofs(dofs)
    cfg = LimiterConfig(avg_bp=True, sensor=True, kappa=1.0)
    out, _ = limited_average_update(eu, cfg, dofs, 5e-4)
    gi = g.ghost
    before = dofs.avg[gi:gi + 10, gi:gi + 10].sum(axis=(0, 1))
    np.testing.assert_allclose(out.sum(axis=(0, 1)), before, rtol=1e-12, atol=1e-12)


def test_local_bounds_brute_force():
    bu = Burgers()
    g = build_grid(0.0, 1.0, 0.0, 1.0, 5, 4)
    rng = np.random.default_rng(11)
    dofs = allocate_dofs(g, 1)
    dofs.avg[...] = rng.uniform(-1.0, 1.0, dofs.avg.shape)
    lo, hi = _scalar_local_bounds(bu, dofs.avg, g)
    gi = g.ghost

    def bar(a, b, axis):
        return intermediate_state(bu, a[None], b[None], axis)[0, 0]

    for i in range(-1, g.n1 + 1):
        for j in range(-1, g.n2 + 1):
            c1, c2 = gi + i, gi + j
            vals = [dofs.avg[c1, c2, 0],
                    bar(dofs.avg[c1 - 1, c2], dofs.avg[c1, c2], 0),
                    bar(dofs.avg[c1, c2], dofs.avg[c1 + 1, c2], 0),
                    bar(dofs.avg[c1, c2 - 1], dofs.avg[c1, c2], 1),
                    bar(dofs.avg[c1, c2], dofs.avg[c1, c2 + 1], 1)]
            assert lo[i + 1, j + 1] == pytest.approx(min(vals), rel=1e-14)
            assert hi[i + 1, j + 1] == pytest.approx(max(vals), rel=1e-14)


def test_global_bounds_hold_after_update():
    adv = Advection((1.0, 1.0))
    g = build_grid(0.0, 1.0, 0.0, 1.0, 16, 16)
    rng = np.random.default_rng(19)
    dofs = allocate_dofs(g, 1)
    for fam in ("avg", "facex", "facey", "node"):
        arr = dofs.array(fam)
        arr[...] = rng.uniform(0.0, 1.0, arr.shape)
    wrap_dofs(dofs)
    cfg = LimiterConfig(avg_bp=True, mp_mode="global", bounds=(0.0, 1.0))
    dt = 0.2 * min(g.dx, g.dy)  # under the bound-preserving cap 0.25 dx/alpha
    out, _ = limited_average_update(adv, cfg, dofs, dt)
    assert out.min() >= -1e-13
    assert out.max() <= 1.0 + 1e-13


def test_euler_update_keeps_admissibility():
    eu = Euler(GAMMA)
    g = build_grid(0.0, 1.0, 0.0, 1.0, 16, 16)
    rng = np.random.default_rng(23)
    P = np.empty(g.shape("avg") + (4,))
    P[..., 0] = 10.0 ** rng.uniform(-9, 0.5, g.shape("avg"))
    P[..., 1] = rng.uniform(-2, 2, g.shape("avg"))
    P[..., 2] = rng.uniform(-2, 2, g.shape("avg"))
    P[..., 3] = 10.0 ** rng.uniform(-9, 0.5, g.shape("avg"))
    dofs = allocate_dofs(g, 4)
    dofs.avg[...] = eu.prim_to_cons(P)
    for fam in ("facex", "facey", "node"):
        arr = dofs.array(fam)
        Pf = np.empty(arr.shape)
        Pf[..., 0] = 10.0 ** rng.uniform(-9, 0.5, arr.shape[:2])
        Pf[..., 1] = rng.uniform(-2, 2, arr.shape[:2])
        Pf[..., 2] = rng.uniform(-2, 2, arr.shape[:2])
        Pf[..., 3] = 10.0 ** rng.uniform(-9, 0.5, arr.shape[:2])
        arr[...] = eu.prim_to_cons(Pf)
    wrap_dofs(dofs)
    r1 = eu.spectral_radius(dofs.avg, 0).max()
    r2 = eu.spectral_radius(dofs.avg, 1).max()
    dt = 0.2 * min(g.dx / r1, g.dy / r2)
    cfg = LimiterConfig(avg_bp=True, sensor=True, kappa=1.0)
    out, diag = limited_average_update(eu, cfg, dofs, dt)
    assert (out[..., 0] > 0.0).all()
    assert (eu.pressure(out) > 0.0).all()
    assert 0.0 <= diag["theta_min"] <= 1.0


def test_config_validation():
    with pytest.raises(ValueError):
        LimiterConfig(mp_mode="none")
    with pytest.raises(ValueError):
        LimiterConfig(kappa=-1.0)
    bu = Burgers()
    g = build_grid(0.0, 1.0, 0.0, 1.0, 4, 4)
    dofs = allocate_dofs(g, 1)
    with pytest.raises(ValueError):
        limited_average_update(bu, LimiterConfig(avg_bp=True), dofs, 1e-3)
