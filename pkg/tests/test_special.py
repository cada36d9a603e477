"""Bessel/Hankel implementation against independent high-precision references."""

import numpy as np
import pytest

from helmtx import special
from helmtx.special import SpecialFunctionDomainError

from oracles import ascending_j0_series, mp_h1, mp_jn, mp_yn


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_j0_at_zero():
    assert special.bessel_j(0, 0.0) == 1.0


def test_j0_at_one_frozen_series_value():
    # ascending power series summed to machine precision
    assert abs(ascending_j0_series(1.0) - 0.7651976865579666) < 1e-15
    assert rel(special.bessel_j(0, 1.0), 0.7651976865579666) < 1e-12


def test_negative_order_parity():
    z = 1.0 + 0.5j
    assert special.bessel_j(-2, z) == pytest.approx(special.bessel_j(2, z), rel=1e-14)
    z = 1.5 - 0.5j
    hm = special.hankel1(-3, z)
    hp = special.hankel1(3, z)
    assert hm.value == pytest.approx(-hp.value, rel=1e-13)
    assert hm.derivative == pytest.approx(-hp.derivative, rel=1e-13)


def test_hankel_h0_at_one_frozen():
    h = special.hankel1(0, 1.0)
    assert rel(h.value, 0.7651976865579666 + 0.08825696421567696j) < 1e-12
    # H_0' = -H_1
    assert rel(h.derivative, -mp_h1(1, 1.0)) < 1e-12


def test_hankel_zero_of_h2_reference_row():
    # reference zero of H_2^(1) (Doring tabulation)
    zstar = 0.4294849652 - 1.2813737977j
    assert abs(special.hankel1(2, zstar).value) <= 1e-9


def test_three_term_recurrence_at_complex_point():
    z = 2.0 + 1.0j
    h0 = special.hankel1(0, z).value
    h1 = special.hankel1(1, z).value
    h2 = special.hankel1(2, z).value
    assert abs(h0 + h2 - (2.0 / z) * h1) / abs(h1) < 1e-10


@pytest.mark.parametrize("n", [0, 1, 2, 5, 11])
def test_against_mpmath_complex_grid(n):
    rng = np.random.default_rng(10 + n)
    pts = rng.uniform(0.15, 30.0, 25) * np.exp(1j * rng.uniform(-np.pi, np.pi, 25))
    pts = np.where(np.abs(pts.imag) > 4.0, pts.real + 4.0j * np.sign(pts.imag), pts)
    for z in pts:
        z = complex(z)
        assert rel(special.bessel_j(n, z), mp_jn(n, z)) < 2e-10
        assert rel(special.hankel1(n, z).value, mp_h1(n, z)) < 2e-9


@pytest.mark.parametrize("n", [0, 1, 3, 7])
def test_real_axis_accuracy(n):
    rng = np.random.default_rng(77 + n)
    for z in rng.uniform(0.2, 900.0, 40):
        h = special.hankel1(n, float(z))
        assert rel(h.value, mp_h1(n, z)) < 1e-12


def test_real_argument_gives_real_j_and_y():
    for z in (0.3, 2.0, 7.7, 40.0):
        j = special.bessel_j(4, z)
        y = special.bessel_y(4, z)
        assert abs(complex(j).imag) < 1e-14
        assert abs(complex(y).imag) < 1e-14
        h = special.hankel1(4, z)
        assert rel(h.value, j + 1j * y) < 1e-13


def test_wronskian_invariant_region():
    rng = np.random.default_rng(5)
    mag = rng.uniform(0.1, 50.0, 60)
    ang = rng.uniform(-np.pi, np.pi, 60)
    z = mag * np.exp(1j * ang)
    z = np.where(np.abs(z.imag) > 5.0, z.real + 5.0j * np.sign(z.imag), z)
    for n in (0, 1, 3):
        for zz in z:
            zz = complex(zz)
            j = special.bessel_j(n, zz)
            jp = special.bessel_j_derivative(n, zz)
            y = special.bessel_y(n, zz)
            ym = special.bessel_y(n - 1, zz)
            yp = ym - (n / zz) * y
            w = j * yp - jp * y
            assert rel(w, 2.0 / (np.pi * zz)) < 1e-10


def test_derivative_central_identity():
    for z in (1.3, 2.0 + 1.0j, 9.0 - 2.0j):
        for n in (1, 4):
            h = special.hankel1(n, z)
            hm = special.hankel1(n - 1, z).value
            hp = special.hankel1(n + 1, z).value
            assert rel(h.derivative, 0.5 * (hm - hp)) < 1e-10


def test_zeros_of_h2_and_hminus2_coincide():
    zstar = 0.4294849652 - 1.2813737977j
    assert abs(special.hankel1(-2, zstar).value) <= 1e-9


def test_domain_errors():
    with pytest.raises(SpecialFunctionDomainError):
        special.hankel1(0, 0.0)
    with pytest.raises(SpecialFunctionDomainError):
        special.bessel_y(1, 0.0)
    with pytest.raises(SpecialFunctionDomainError):
        special.bessel_j(0, 2.0e4)
    with pytest.raises(SpecialFunctionDomainError):
        special.hankel1(300, 1.0)


def test_tiny_arguments_finite_not_nan():
    h = special.hankel1(0, 1e-9)
    assert np.isfinite(h.value.real) and np.isfinite(h.value.imag)
    h = special.hankel1(1, 1e-9 + 1e-10j)
    assert np.isfinite(h.value.real) and np.isfinite(h.value.imag)


def test_array_entry_points_match_scalars():
    z = np.array([0.5, 3.0, 17.0])
    h0, h1 = special.hankel01_array(z)
    for i, zz in enumerate(z):
        assert rel(h0[i], special.hankel1(0, zz).value) < 1e-14
        assert rel(h1[i], special.hankel1(1, zz).value) < 1e-14
    zc = np.array([0.5 + 0.2j, 3.0 - 1.0j])
    j0, j1 = special.besselj01_array(zc)
    for i, zz in enumerate(zc):
        assert rel(j0[i], special.bessel_j(0, complex(zz))) < 1e-12
        assert rel(j1[i], special.bessel_j(1, complex(zz))) < 1e-12


def test_backend_parity_compiled_vs_fallback():
    import helmtx._hankel_fallback as fb

    try:
        import helmtx._hankel_core as core
    except ImportError:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(0)
    zr = rng.uniform(0.01, 300.0, 4000)
    for a, b in zip(core.bessel01_real(zr), fb.bessel01_real(zr)):
        assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < 1e-13
    zc = rng.uniform(-25, 25, 2000) + 1j * rng.uniform(-6, 6, 2000)
    zc = zc[np.abs(zc) > 0.05]
    for a, b in zip(core.hankel01_cplx(zc), fb.hankel01_cplx(zc)):
        a, b = np.asarray(a), np.asarray(b)
        assert np.max(np.abs(a - b) / np.abs(b)) < 1e-7
