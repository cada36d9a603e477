"""Analytic circle reference: Mie series, eigenconditions, Hankel zeros."""

import numpy as np
import pytest

from helmtx import mie
from helmtx.direct import factor_mixed, solve_mixed
from helmtx.geometry import discretize, make_circle
from helmtx.systems import IncidentField, ProblemParams, assemble_bundle, build_mixed

from oracles import mp_h1, radial_log_derivative_fd

DORING_H2 = 0.4294849652 - 1.2813737977j
DORING_H3 = 1.3080120323 - 1.6817888047j


def test_homogeneous_medium_no_scattering():
    params = ProblemParams(eps0=1.0, eps1=1.0, omega=2.0)
    sol = mie.mie_solve(1.0, params, n_max=12)
    assert np.max(np.abs(sol.a)) < 1e-13
    for i, n in enumerate(sol.orders):
        assert sol.b[i] == pytest.approx(1j ** int(n), abs=1e-12)


def test_energy_balance_lossless():
    for omega, eps1 in ((1.0, 2.0), (2.0, 5.0), (10.0, 10.0)):
        params = ProblemParams(eps0=1.0, eps1=eps1, omega=omega)
        sol = mie.mie_solve(1.0, params)
        assert abs(sol.energy_balance()) < 1e-10


def test_truncation_adequacy_and_doubling():
    params = ProblemParams(eps0=1.0, eps1=2.0, omega=1.0)
    sol = mie.mie_solve(1.0, params)
    assert sol.truncation_margin() < 1e-14
    grid = discretize(make_circle(1.0), 128)
    u1, q1 = mie.mie_trace(sol, grid)
    sol2 = mie.mie_solve(1.0, params, n_max=2 * sol.n_max)
    u2, q2 = mie.mie_trace(sol2, grid)
    assert mie.relative_trace_error(u1, q1, u2, q2) < 1e-13


def test_trace_periodicity_and_self_error():
    params = ProblemParams(eps0=1.0, eps1=2.0, omega=1.0)
    sol = mie.mie_solve(1.0, params)
    grid = discretize(make_circle(1.0), 64)
    u, q = mie.mie_trace(sol, grid)
    assert mie.relative_trace_error(u, q, u, q) == 0.0
    # evaluation depends on the node position only through its angle
    g2 = discretize(make_circle(1.0), 64)
    u2, q2 = mie.mie_trace(sol, g2)
    assert np.array_equal(u, u2) and np.array_equal(q, q2)


def test_trace_requires_matching_circle():
    params = ProblemParams(eps0=1.0, eps1=2.0, omega=1.0)
    sol = mie.mie_solve(1.0, params)
    with pytest.raises(ValueError):
        mie.mie_trace(sol, discretize(make_circle(0.5), 32))


def test_mode_determinant_proportional_to_eigencondition():
    # the 2x2 mode matrix determinant equals c1 up to the eps0*eps1 factor
    from helmtx import special

    n, omega, a, eps0, eps1 = 3, 1.7, 1.0, 1.0, 2.5
    params = ProblemParams(eps0=eps0, eps1=eps1, omega=omega)
    k0, k1 = params.k0, params.k1
    h = special.hankel1(n, k0 * a)
    j1a = special.bessel_j(n, k1 * a)
    j1p = special.bessel_j_derivative(n, k1 * a)
    det = h.value * (-(k1 / eps1) * j1p) - (-j1a) * (k0 / eps0) * h.derivative
    c1, _ = mie.eigencondition(n, omega, a, eps0, eps1)
    assert c1 == pytest.approx(eps0 * eps1 * det, rel=1e-12)


def test_eigencondition_c2_vanishes_at_hankel_zero():
    # a = 0.5, eps1 = 4: k1 a = omega, so c2's Hankel factor vanishes at the zero
    c1, c2 = mie.eigencondition(2, DORING_H2, 0.5, 1.0, 4.0)
    assert abs(c2) < 1e-9
    c1b, c2b = mie.eigencondition(-2, DORING_H2, 0.5, 1.0, 4.0)
    assert abs(c2b) < 1e-9  # zeros of H_n and H_-n coincide
    # alpha enters only the second relation
    _, c2c = mie.eigencondition(2, DORING_H2, 0.5, 1.0, 4.0, alpha=0.7)
    assert abs(c2c) < 1e-9


def test_eigencondition_homogeneous_reduces_to_wronskian():
    omega, a, eps = 1.3, 1.0, 1.0
    c1, _ = mie.eigencondition(4, omega, a, eps, eps)
    k = omega * np.sqrt(eps)
    assert c1 == pytest.approx(2j * eps / (np.pi * a), rel=1e-10)
    assert abs(c1) > 0.1


def test_hankel_zero_doring_values():
    z2 = mie.hankel_zero(2, 0.4 - 1.3j)
    assert abs(z2 - DORING_H2) < 1e-9
    z3 = mie.hankel_zero(3, 1.3 - 1.7j)
    assert abs(z3 - DORING_H3) < 1e-9


def test_newton_quadratic_convergence():
    from helmtx import special

    seed = 0.41 - 1.32j
    errs = []
    z = seed
    target = mie.hankel_zero(2, seed)
    for _ in range(4):
        h = special.hankel1(2, z)
        z = z - h.value / h.derivative
        errs.append(abs(z - target))
    # quadratic: err_{k+1} ~ C err_k^2 (until machine floor)
    assert errs[1] < 10 * errs[0] ** 2 / max(errs[0], 1e-16) * errs[0]
    assert errs[1] < errs[0] ** 1.5


def test_hankel_zero_nonconvergence_raises():
    with pytest.raises(mie.RootFindError):
        mie.hankel_zero(2, 30.0 + 10.0j, max_iter=4)


def test_mie_against_radial_ode_fd():
    # guard the oracle: the interior logarithmic derivative implied by the
    # transmission conditions must match an independent FD integration of
    # the radial ODE (no Bessel functions involved on the FD side)
    from helmtx import special

    n, a = 2, 1.0
    params = ProblemParams(eps0=1.0, eps1=2.0, omega=1.0)
    k0, k1 = params.k0.real, params.k1.real
    sol = mie.mie_solve(a, params)
    i = list(sol.orders).index(n)
    h = special.hankel1(n, k0 * a)
    hp = h.derivative
    num = k0 * ((1j ** n) * special.bessel_j_derivative(n, k0 * a) + sol.a[i] * hp)
    den = (1j ** n) * special.bessel_j(n, k0 * a) + sol.a[i] * h.value
    # (1/eps0) u_ext' / u_ext = (1/eps1) u_int' / u_int at r = a
    lhs = num / den / params.eps0
    rho_fd = radial_log_derivative_fd(n, k1, a)
    assert lhs == pytest.approx(rho_fd / params.eps1, rel=1e-7)


def test_mie_reproduced_by_dense_bie_solve():
    params = ProblemParams(eps0=1.0, eps1=2.0, omega=1.0)
    grid = discretize(make_circle(1.0), 1600)
    ops = assemble_bundle(params, grid, order=1)
    ms = build_mixed(params, grid, ops, incident=IncidentField(kind="plane"))
    u, q, _ = solve_mixed(factor_mixed(ms), ms.b3)
    sol = mie.mie_solve(1.0, params)
    ua, qa = mie.mie_trace(sol, grid)
    assert mie.relative_trace_error(u, q, ua, qa) <= 1e-3
