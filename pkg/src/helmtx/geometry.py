"""Smooth closed boundary curves and equispaced Nystrom grids.

Curves are supplied analytically (closed-form first and second parameter
derivatives): a circle, or a star-shaped boundary with a trigonometric
radial polynomial.  The parameterization must be counterclockwise and
2*pi-periodic; the unit normal then points into the exterior domain.
Non-self-intersection is a documented contract, not checked.
"""

from dataclasses import dataclass, field

import numpy as np


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    """Parameterized closed curve x(t): [0, 2pi) -> R^2 with derivatives."""

    descriptor: dict

    def point(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def second_derivative(self, t):
        raise NotImplementedError


@dataclass(frozen=True)
class CircleCurve(Curve):
    radius: float = 1.0

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([-np.sin(t), np.cos(t)], axis=-1)

    def second_derivative(self, t):
        return -self.point(t)


@dataclass(frozen=True)
class RadialFourierCurve(Curve):
    """x(t) = rho(t) (cos t, sin t) with rho a trigonometric polynomial.

    rho(t) = cos_coeffs[0] + sum_m cos_coeffs[m] cos(mt) + sin_coeffs[m] sin(mt),
    with sin_coeffs[0] ignored.  rho must stay positive (checked on a
    sample grid at construction).
    """

    cos_coeffs: tuple = (1.0,)
    sin_coeffs: tuple = ()

    def _rho(self, t, order):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for m, c in enumerate(self.cos_coeffs):
            f = float(m) ** order if order else 1.0
            phase = [np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x)][order]
            out = out + c * f * phase(m * t)
        for m, s in enumerate(self.sin_coeffs):
            if m == 0:
                continue
            f = float(m) ** order if order else 1.0
            phase = [np.sin, np.cos, lambda x: -np.sin(x)][order]
            out = out + s * f * phase(m * t)
        return out

    def __post_init__(self):
        ts = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
        if np.min(self._rho(ts, 0)) <= 0.0:
            raise GeometryError("radial Fourier curve has non-positive radius")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        rho = self._rho(t, 0)
        return np.stack([rho * np.cos(t), rho * np.sin(t)], axis=-1)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        rho, drho = self._rho(t, 0), self._rho(t, 1)
        c, s = np.cos(t), np.sin(t)
        return np.stack([drho * c - rho * s, drho * s + rho * c], axis=-1)

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        rho, drho, ddrho = self._rho(t, 0), self._rho(t, 1), self._rho(t, 2)
        c, s = np.cos(t), np.sin(t)
        return np.stack([
            ddrho * c - 2.0 * drho * s - rho * c,
            ddrho * s + 2.0 * drho * c - rho * s,
        ], axis=-1)


def make_circle(radius):
    """Circle of given radius centered at the origin, outward normal."""
    radius = float(radius)
    if radius <= 0.0:
        raise GeometryError(f"radius must be positive, got {radius}")
    return CircleCurve(descriptor={"type": "circle", "radius": radius}, radius=radius)


def make_radial_fourier(cos_coeffs, sin_coeffs=()):
    """Star-shaped curve from radial Fourier coefficients."""
    cos_coeffs = tuple(float(c) for c in cos_coeffs)
    sin_coeffs = tuple(float(s) for s in sin_coeffs)
    return RadialFourierCurve(
        descriptor={"type": "fourier", "cos": list(cos_coeffs), "sin": list(sin_coeffs)},
        cos_coeffs=cos_coeffs,
        sin_coeffs=sin_coeffs,
    )


def curve_from_descriptor(desc):
    """Build a Curve from a JSON-style descriptor dict."""
    kind = desc.get("type")
    if kind == "circle":
        return make_circle(desc.get("radius", 1.0))
    if kind == "fourier":
        return make_radial_fourier(desc.get("cos", [1.0]), desc.get("sin", []))
    raise GeometryError(f"unknown curve type {kind!r}")


@dataclass(frozen=True)
class Grid:
    """Equispaced Nystrom grid on a curve.

    Immutable after creation; shareable across concurrent readers.
    """

    curve: Curve
    n: int
    h: float
    t: np.ndarray
    points: np.ndarray       # (N, 2)
    normals: np.ndarray      # (N, 2), unit, directed into the exterior
    jacobians: np.ndarray    # |x'(t_i)|
    curvature: np.ndarray    # signed, positive for convex with outward normal

    def __post_init__(self):
        for arr in (self.t, self.points, self.normals, self.jacobians, self.curvature):
            arr.setflags(write=False)


def discretize(curve, n):
    """Equispaced grid with n nodes (n even, n >= 4)."""
    n = int(n)
    if n < 4 or n % 2:
        raise GeometryError(f"node count must be even and >= 4, got {n}")
    h = 2.0 * np.pi / n
    t = h * np.arange(n)
    pts = curve.point(t)
    d1 = curve.derivative(t)
    d2 = curve.second_derivative(t)
    jac = np.hypot(d1[:, 0], d1[:, 1])
    if np.min(jac) <= 1e-14:
        raise GeometryError("degenerate parameterization: |x'(t)| vanishes on the grid")
    normals = np.stack([d1[:, 1], -d1[:, 0]], axis=-1) / jac[:, None]
    kappa = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / jac**3
    return Grid(curve=curve, n=n, h=h, t=t, points=pts, normals=normals,
                jacobians=jac, curvature=kappa)
