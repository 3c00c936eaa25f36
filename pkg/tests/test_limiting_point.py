"""Low-order point updates and point scaling limiters."""

import numpy as np
import pytest

from activeflux import (Advection, Burgers, Euler, NumericalStateError,
                        allocate_dofs, build_grid)
from activeflux.limiting_average import loworder_flux
from activeflux.limiting_point import (convexity_margin, limit_point_euler,
                                       limit_point_scalar, llf_point_updates)

from _util import fill_from_function


def test_loworder_flux_burgers_frozen():
    # f = u^2/2, alpha = max(|1|,|-1|) = 1:
    # 0.5*(0.5 + 0.5) - 0.5*1*(-1 - 1) = 1.5
    bu = Burgers()
    a = np.array([[1.0]])
    b = np.array([[-1.0]])
    f, al = loworder_flux(bu, a, b, 0)
    assert f[0, 0] == pytest.approx(1.5, abs=1e-15)
    assert al[0] == pytest.approx(1.0)


def _linear_dofs(field_fn):
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 6, 5)
    dofs = fill_from_function(grid, field_fn, 1)
    return Advection(), grid, dofs


def test_linear_transport_spacings():
    # On u = x or u = y with unit advection, LLF reduces to upwinding and
    # each flux difference is exactly (spacing of the coupled values).
    # The divisor convention then fixes the constants below; in particular
    # the face tangential part moves by dt/2 because the coupled nodes sit
    # half a cell away while the divisor stays at the full cell size.
    dt = 0.01
    for field, n_shift, fx_shift, fy_shift in (
        (lambda x, y: x + 0.0 * y, dt, dt, dt / 2),
        (lambda x, y: y + 0.0 * x, dt, dt / 2, dt),
    ):
        ad, grid, dofs = _linear_dofs(field)
        nd_low, fx_low, fy_low = llf_point_updates(ad, dofs, dt)
        assert np.allclose(
            nd_low, dofs.node[grid.interior("node")] - n_shift, atol=1e-14)
        assert np.allclose(
            fx_low, dofs.facex[grid.interior("facex")] - fx_shift, atol=1e-14)
        assert np.allclose(
            fy_low, dofs.facey[grid.interior("facey")] - fy_shift, atol=1e-14)


def test_constant_state_unchanged():
    eu = Euler()
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 4, 4)
    dofs = allocate_dofs(grid, 4)
    state = eu.prim_to_cons(np.array([1.2, 0.3, -0.4, 2.0]))
    for fam in ("avg", "facex", "facey", "node"):
        dofs.array(fam)[...] = state
    nd, fx, fy = llf_point_updates(eu, dofs, 0.01)
    assert np.allclose(nd, state, atol=1e-15)
    assert np.allclose(fx, state, atol=1e-15)
    assert np.allclose(fy, state, atol=1e-15)


def _random_euler_dofs(seed, n1=6, n2=5):
    rng = np.random.default_rng(seed)
    eu = Euler()
    grid = build_grid(0.0, 1.0, 0.0, 1.0, n1, n2)
    dofs = allocate_dofs(grid, 4)
    for fam in ("avg", "facex", "facey", "node"):
        arr = dofs.array(fam)
        prim = np.empty(arr.shape)
        prim[..., 0] = rng.uniform(0.2, 3.0, arr.shape[:-1])
        prim[..., 1] = rng.uniform(-2.0, 2.0, arr.shape[:-1])
        prim[..., 2] = rng.uniform(-2.0, 2.0, arr.shape[:-1])
        prim[..., 3] = rng.uniform(0.1, 4.0, arr.shape[:-1])
        arr[...] = eu.prim_to_cons(prim)
    return eu, grid, dofs


def _pair(model, a, b, axis):
    f, _ = loworder_flux(model, a[None, None, :], b[None, None, :], axis)
    return f[0, 0]


def test_vectorized_matches_per_point_euler():
    eu, grid, dofs = _random_euler_dofs(7)
    g, n1, n2 = grid.ghost, grid.n1, grid.n2
    dt = 0.003
    nd_low, fx_low, fy_low = llf_point_updates(eu, dofs, dt)
    nd, fx, fy = dofs.node, dofs.facex, dofs.facey
    rx, ry = dt / grid.dx, dt / grid.dy

    for k in range(n1 + 1):
        for l in range(n2 + 1):
            c1, c2 = g + k, g + l
            u = nd[c1, c2]
            ref = (u
                   - rx * (_pair(eu, u, nd[c1 + 1, c2], 0)
                           - _pair(eu, nd[c1 - 1, c2], u, 0))
                   - ry * (_pair(eu, u, nd[c1, c2 + 1], 1)
                           - _pair(eu, nd[c1, c2 - 1], u, 1)))
            assert np.allclose(nd_low[k, l], ref, rtol=1e-12, atol=1e-13)

    for k in range(n1 + 1):
        for j in range(n2):
            c1, c2 = g + k, g + j
            u = fx[c1, c2]
            ref = (u
                   - rx * (_pair(eu, u, fx[c1 + 1, c2], 0)
                           - _pair(eu, fx[c1 - 1, c2], u, 0))
                   - ry * (_pair(eu, u, nd[c1, c2 + 1], 1)
                           - _pair(eu, nd[c1, c2], u, 1)))
            assert np.allclose(fx_low[k, j], ref, rtol=1e-12, atol=1e-13)

    for i in range(n1):
        for l in range(n2 + 1):
            c1, c2 = g + i, g + l
            u = fy[c1, c2]
            ref = (u
                   - ry * (_pair(eu, u, fy[c1, c2 + 1], 1)
                           - _pair(eu, fy[c1, c2 - 1], u, 1))
                   - rx * (_pair(eu, u, nd[c1 + 1, c2], 0)
                           - _pair(eu, nd[c1, c2], u, 0)))
            assert np.allclose(fy_low[i, l], ref, rtol=1e-12, atol=1e-13)


def test_scalar_bounds_under_dt_cap():
    rng = np.random.default_rng(11)
    ad = Advection(speeds=(1.0, 1.0))
    grid = build_grid(0.0, 1.0, 0.0, 1.0, 12, 9)
    dofs = allocate_dofs(grid, 1)
    for fam in ("avg", "facex", "facey", "node"):
        arr = dofs.array(fam)
        arr[...] = rng.uniform(0.0, 1.0, arr.shape)
    dt = 0.24 * min(grid.dx, grid.dy)
    assert convexity_margin(ad, dofs, dt) > 0.0
    for low in llf_point_updates(ad, dofs, dt):
        assert low.min() >= 0.0
        assert low.max() <= 1.0


def test_euler_admissible_under_dt_cap():
    eu, grid, dofs = _random_euler_dofs(23, n1=10, n2=8)
    r1 = max(float(eu.spectral_radius(dofs.array(f), 0).max())
             for f in ("node", "facex", "facey"))
    r2 = max(float(eu.spectral_radius(dofs.array(f), 1).max())
             for f in ("node", "facex", "facey"))
    dt = 0.24 * min(grid.dx / r1, grid.dy / r2)
    assert convexity_margin(eu, dofs, dt) > 0.0
    for low in llf_point_updates(eu, dofs, dt):
        assert low[..., 0].min() > 0.0
        assert eu.pressure(low).min() > 0.0


def test_limit_point_scalar_frozen():
    uh = np.array([[1.2]])
    ul = np.array([[0.5]])
    out = limit_point_scalar(uh, ul, (0.0, 1.0))
    # theta = min(0.5/0.7, 0.5/0.7, 1) = 5/7 and the blend lands on the bound
    assert out[0, 0] == pytest.approx(1.0, abs=1e-14)


def test_limit_point_scalar_endpoints():
    ul = np.array([[0.5]])
    # theta = 1 regime: high-order value inside and closer to ul than bounds
    uh = np.array([[0.6]])
    assert limit_point_scalar(uh, ul, (0.0, 1.0))[0, 0] == 0.6
    # equal states guard
    assert limit_point_scalar(ul.copy(), ul, (0.0, 1.0))[0, 0] == 0.5
    # undershoot clips to the lower bound
    uh = np.array([[-0.3]])
    out = limit_point_scalar(uh, ul, (0.0, 1.0))
    assert out[0, 0] == pytest.approx(0.0, abs=1e-15)


def test_limit_point_scalar_property():
    rng = np.random.default_rng(5)
    n = 100000
    ul = rng.uniform(0.0, 1.0, (n, 1))
    uh = ul + rng.normal(0.0, 2.0, (n, 1))
    out = limit_point_scalar(uh, ul, (0.0, 1.0))
    assert out.min() >= -1e-12
    assert out.max() <= 1.0 + 1e-12
    # limited value lies between the two inputs
    lo = np.minimum(uh, ul) - 1e-12
    hi = np.maximum(uh, ul) + 1e-12
    assert np.all(out >= lo) and np.all(out <= hi)


def test_limit_point_euler_frozen():
    eu = Euler()
    eps = 1e-13
    uh = np.array([[-0.5, 0.0, 0.0, 2.0]])
    ul = np.array([[1.0, 0.1, 0.0, 2.0]])
    out = limit_point_euler(eu, uh, ul, eps)
    # theta* = (1 - eps)/1.5, blended density lands on the eps floor; at
    # rest the pressure step then passes and keeps the blended state
    assert out[0, 0] == pytest.approx(eps, rel=1e-3)
    assert out[0, 3] == pytest.approx(2.0)
    assert eu.pressure(out)[0] > 0.0


def test_limit_point_euler_identity_when_admissible():
    eu = Euler()
    rng = np.random.default_rng(19)
    prim = np.stack([rng.uniform(0.5, 2.0, 50), rng.uniform(-1, 1, 50),
                     rng.uniform(-1, 1, 50), rng.uniform(0.5, 2.0, 50)],
                    axis=-1)
    uh = eu.prim_to_cons(prim)
    prim[..., 0] += 0.3
    ul = eu.prim_to_cons(prim)
    out = limit_point_euler(eu, uh, ul, 1e-13)
    assert np.array_equal(out, uh)


def test_limit_point_euler_property():
    eu = Euler()
    eps = 1e-13
    rng = np.random.default_rng(31)
    n = 100000
    # low states admissible with margin, high states wild
    rho_l = 10.0 ** rng.uniform(-8, 1, n)
    p_l = 10.0 ** rng.uniform(-8, 1, n)
    v_l = rng.normal(0.0, 2.0, (n, 2))
    ul = eu.prim_to_cons(np.stack([rho_l, v_l[:, 0], v_l[:, 1], p_l], -1))
    uh = ul + rng.normal(0.0, 1.0, (n, 4)) * np.array([1.0, 2.0, 2.0, 3.0])
    out = limit_point_euler(eu, uh, ul, eps)
    assert out[..., 0].min() > 0.0
    assert eu.pressure(out).min() > 0.0
    # the blend never overshoots past the eps floor by construction
    assert out[..., 0].min() >= eps * (1.0 - 1e-9)


def test_limit_point_euler_rejects_bad_low_state():
    eu = Euler()
    uh = np.array([[1.0, 0.0, 0.0, 1.0]])
    ul = np.array([[-1.0, 0.0, 0.0, 1.0]])
    with pytest.raises(NumericalStateError):
        limit_point_euler(eu, uh, ul, 1e-13)
