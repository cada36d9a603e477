"""Curve and grid construction."""

import numpy as np
import pytest

from helmtx.geometry import (GeometryError, curve_from_descriptor, discretize,
                             make_circle, make_radial_fourier)


def test_circle_basic_identities():
    c = make_circle(1.0)
    g = discretize(c, 16)
    assert np.allclose(g.points[0], [1.0, 0.0], atol=1e-15)
    assert np.allclose(g.normals[0], [1.0, 0.0], atol=1e-15)
    assert np.allclose(g.curvature, 1.0, atol=1e-13)


def test_circle_curvature_scaling():
    g = discretize(make_circle(0.5), 16)
    assert np.allclose(g.curvature, 2.0, atol=1e-13)


def test_circle_n4_nodes():
    g = discretize(make_circle(1.0), 4)
    expect = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    assert np.allclose(g.points, expect, atol=1e-14)


def test_jacobian_and_step():
    g = discretize(make_circle(1.0), 100)
    assert np.allclose(g.jacobians, 1.0, atol=1e-14)
    assert g.h == pytest.approx(2 * np.pi / 100)
    g = discretize(make_circle(2.0), 16)
    assert np.allclose(g.jacobians, 2.0, atol=1e-14)


@pytest.mark.parametrize("n", [4, 16, 64, 256])
def test_circle_length_exact_for_all_n(n):
    g = discretize(make_circle(1.5), n)
    assert np.sum(g.jacobians) * g.h == pytest.approx(2 * np.pi * 1.5, rel=1e-14)


def test_fourier_curve_normals_against_fd_tangent():
    curve = make_radial_fourier([1.0, 0.0, 0.25], [0.0, 0.1])
    g = discretize(curve, 64)
    eps = 1e-6
    tang = (curve.point(g.t + eps) - curve.point(g.t - eps)) / (2 * eps)
    dots = np.abs(np.sum(tang * g.normals, axis=1)) / np.hypot(tang[:, 0], tang[:, 1])
    assert np.max(dots) < 1e-9


def test_normal_tangent_orthogonality_analytic():
    curve = make_radial_fourier([1.0, 0.0, 0.25], [0.0, 0.1])
    g = discretize(curve, 64)
    d1 = curve.derivative(g.t)
    dots = np.abs(np.sum(d1 * g.normals, axis=1)) / g.jacobians
    assert np.max(dots) < 1e-12
    assert np.max(np.abs(np.hypot(g.normals[:, 0], g.normals[:, 1]) - 1.0)) < 1e-14


def test_fourier_length_richardson():
    curve = make_radial_fourier([1.0, 0.0, 0.25], [0.0, 0.1])
    lengths = {}
    for n in (64, 128, 256):
        g = discretize(curve, n)
        lengths[n] = np.sum(g.jacobians) * g.h
    # trapezoid of a smooth periodic function converges fast
    assert abs(lengths[128] - lengths[256]) < 1e-12
    assert abs(lengths[64] - lengths[256]) < 1e-9


def test_rejections():
    with pytest.raises(GeometryError):
        make_circle(0.0)
    with pytest.raises(GeometryError):
        make_circle(-2.0)
    with pytest.raises(GeometryError):
        discretize(make_circle(1.0), 7)
    with pytest.raises(GeometryError):
        discretize(make_circle(1.0), 2)
    with pytest.raises(GeometryError):
        make_radial_fourier([0.1, 0.0, 0.5])  # radius goes negative


def test_descriptor_roundtrip():
    c = curve_from_descriptor({"type": "circle", "radius": 1.5})
    assert c.descriptor["radius"] == 1.5
    f = curve_from_descriptor({"type": "fourier", "cos": [1.0, 0.0, 0.2], "sin": [0.0, 0.1]})
    assert f.descriptor["cos"] == [1.0, 0.0, 0.2]
    with pytest.raises(GeometryError):
        curve_from_descriptor({"type": "ellipse"})


def test_grids_immutable():
    g = discretize(make_circle(1.0), 8)
    with pytest.raises(ValueError):
        g.points[0, 0] = 5.0
