"""Separation-of-variables reference solution for a circular scatterer,
circle eigenvalue conditions, and a Newton root-finder for Hankel zeros.

These are the ground-truth oracles the solvers are validated against.
"""

from dataclasses import dataclass

import numpy as np

from . import special
from .geometry import Grid
from .systems import ProblemParams


class MieResonanceError(RuntimeError):
    """A mode system was singular: omega is a true transmission eigenvalue."""


@dataclass(frozen=True)
class MieSolution:
    """Modal coefficients for plane-wave (e^{i k0 x1}) scattering by a circle.

    Exterior scattered field  sum_n a_n H_n^(1)(k0 r) e^{i n theta},
    interior field            sum_n b_n J_n(k1 r) e^{i n theta}.
    """

    radius: float
    params: ProblemParams
    n_max: int
    orders: np.ndarray
    a: np.ndarray
    b: np.ndarray
    a_contrib: np.ndarray  # |a_n H_n(k0 a)|, scattered-trace amplitude per mode
    b_contrib: np.ndarray  # |b_n J_n(k1 a)|, interior-trace amplitude per mode

    def truncation_margin(self):
        """Edge-mode trace amplitude relative to the peak mode amplitude."""
        edge = max(self.a_contrib[0], self.a_contrib[-1],
                   self.b_contrib[0], self.b_contrib[-1])
        peak = max(np.max(self.a_contrib), np.max(self.b_contrib), 1e-300)
        return edge / peak

    def energy_balance(self):
        """sum |a_n|^2 + Re sum (-i)^n a_n; zero for lossless media."""
        phase = (-1j) ** self.orders
        return float(np.sum(np.abs(self.a) ** 2) + np.real(np.sum(phase * self.a)))


def default_order_cutoff(k1, radius):
    return int(np.ceil(abs(k1) * radius)) + 30


def mie_solve(radius, params: ProblemParams, n_max=None) -> MieSolution:
    """Solve the per-mode 2x2 transmission systems for all |n| <= n_max."""
    omega = complex(params.omega)
    if omega.imag != 0.0 or omega.real <= 0.0:
        raise ValueError("Mie reference requires real positive omega")
    k0, k1 = params.k0, params.k1
    if n_max is None:
        n_max = default_order_cutoff(k1, radius)
    orders = np.arange(-n_max, n_max + 1)
    a = np.zeros(orders.shape, dtype=complex)
    b = np.zeros(orders.shape, dtype=complex)
    a_contrib = np.zeros(orders.shape)
    b_contrib = np.zeros(orders.shape)
    for i, n in enumerate(orders):
        n = int(n)
        j0a = special.bessel_j(n, k0 * radius)
        j0p = special.bessel_j_derivative(n, k0 * radius)
        j1a = special.bessel_j(n, k1 * radius)
        j1p = special.bessel_j_derivative(n, k1 * radius)
        h = special.hankel1(n, k0 * radius)
        m = np.array([[h.value, -j1a],
                      [(k0 / params.eps0) * h.derivative, -(k1 / params.eps1) * j1p]])
        rhs = -np.array([(1j ** n) * j0a, (k0 / params.eps0) * (1j ** n) * j0p])
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) < 1e-14 * (abs(m[0, 0] * m[1, 1]) + abs(m[0, 1] * m[1, 0]) + 1e-300):
            raise MieResonanceError(f"mode {n} singular at omega = {omega}")
        a[i] = (rhs[0] * m[1, 1] - m[0, 1] * rhs[1]) / det
        b[i] = (m[0, 0] * rhs[1] - rhs[0] * m[1, 0]) / det
        a_contrib[i] = abs(a[i] * h.value)
        b_contrib[i] = abs(b[i] * j1a)
    return MieSolution(radius=float(radius), params=params, n_max=int(n_max),
                       orders=orders, a=a, b=b, a_contrib=a_contrib, b_contrib=b_contrib)


def mie_trace(solution: MieSolution, grid: Grid):
    """Boundary traces (u, q) of the interior field at the grid nodes.

    u = interior field on the circle, q = (1/eps1) du1/dnu.
    """
    desc = grid.curve.descriptor
    if desc.get("type") != "circle" or abs(desc.get("radius") - solution.radius) > 1e-13:
        raise ValueError("grid curve does not match the Mie solution circle")
    theta = np.arctan2(grid.points[:, 1], grid.points[:, 0])
    k1 = solution.params.k1
    u = np.zeros(grid.n, dtype=complex)
    q = np.zeros(grid.n, dtype=complex)
    for i, n in enumerate(solution.orders):
        n = int(n)
        mode = np.exp(1j * n * theta)
        u += solution.b[i] * special.bessel_j(n, k1 * solution.radius) * mode
        q += (k1 / solution.params.eps1) * solution.b[i] \
            * special.bessel_j_derivative(n, k1 * solution.radius) * mode
    return u, q


def relative_trace_error(u, q, u_ref, q_ref):
    """Relative 2-norm error of the stacked (u, q) boundary solution."""
    num = np.linalg.norm(np.concatenate([u - u_ref, q - q_ref]))
    den = np.linalg.norm(np.concatenate([u_ref, q_ref]))
    return float(num / den)


def eigencondition(n, omega, radius, eps0, eps1, alpha=0.0):
    """The two circle eigenvalue relations as functions of omega.

    c1 = -eps0 k1 H_n(k0 a) J_n'(k1 a) + eps1 k0 H_n'(k0 a) J_n(k1 a)
    c2 = H_n(k1 a) (J_n(k0 a) + alpha k0 J_n'(k0 a))

    alpha is a free parameter of the second relation; only the
    H_n(k1 a) = 0 factor of c2 is used by the verification suite.
    """
    omega = complex(omega)
    if omega == 0:
        raise ValueError("omega must be nonzero")
    k0 = omega * np.sqrt(eps0)
    k1 = omega * np.sqrt(eps1)
    h0 = special.hankel1(n, k0 * radius)
    j1 = special.bessel_j(n, k1 * radius)
    j1p = special.bessel_j_derivative(n, k1 * radius)
    c1 = -eps0 * k1 * h0.value * j1p + eps1 * k0 * h0.derivative * j1
    h1 = special.hankel1(n, k1 * radius)
    j0 = special.bessel_j(n, k0 * radius)
    j0p = special.bessel_j_derivative(n, k0 * radius)
    c2 = h1.value * (j0 + alpha * k0 * j0p)
    return c1, c2


class RootFindError(RuntimeError):
    pass


def hankel_zero(n, seed, tol=1e-12, max_iter=50):
    """Newton iteration for a zero of H_n^(1) from a lower-half-plane seed."""
    z = complex(seed)
    for _ in range(max_iter):
        h = special.hankel1(n, z)
        if abs(h.value) <= tol:
            return z
        if h.derivative == 0:
            raise RootFindError(f"H_{n}' vanished at {z}")
        z = z - h.value / h.derivative
    h = special.hankel1(n, z)
    if abs(h.value) <= tol:
        return z
    raise RootFindError(f"Newton did not converge from seed {seed} (|H| = {abs(h.value):.2e})")
