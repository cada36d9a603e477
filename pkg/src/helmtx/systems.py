"""Discretized mixed (3N) and ordinary (2N) Burton-Miller systems.

Unknowns: exterior trace u, scaled normal derivative q = (1/eps1) du1/dnu,
and (mixed formulation only) the indirect density phi of the interior
single-layer representation u1 = S_{k1} phi.
"""

from dataclasses import dataclass, field

import numpy as np

from .geometry import Grid
from .quadrature import OperatorMatrix, assemble_four


class SystemError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemParams:
    """Material constants, angular frequency, and Burton-Miller constant."""

    eps0: float = 1.0
    eps1: float = 2.0
    omega: complex = 1.0
    beta: complex = None  # default i/k0

    def __post_init__(self):
        if self.eps0 <= 0 or self.eps1 <= 0:
            raise SystemError("material constants eps0, eps1 must be positive")
        if complex(self.omega) == 0:
            raise SystemError("omega must be nonzero")
        if self.beta is None:
            object.__setattr__(self, "beta", 1j / self.k0)
        if complex(self.beta).imag == 0:
            raise SystemError("Burton-Miller constant must have nonzero imaginary part")

    @property
    def k0(self):
        return complex(self.omega) * np.sqrt(self.eps0)

    @property
    def k1(self):
        return complex(self.omega) * np.sqrt(self.eps1)


@dataclass(frozen=True)
class IncidentField:
    """Incident wave: plane wave with unit direction, or an exterior point source."""

    kind: str
    direction: tuple = (1.0, 0.0)
    source: tuple = (0.0, 0.0)

    def evaluate(self, params: ProblemParams, grid: Grid):
        if self.kind == "plane":
            return incident_plane_wave(self.direction, params.k0, grid)
        if self.kind == "point":
            return incident_point_source(self.source, params.k0, grid)
        raise SystemError(f"unknown incident field kind {self.kind!r}")


def incident_plane_wave(direction, k0, grid: Grid):
    """u_in = exp(i k0 d.x) and q_in = du_in/dnu at the grid nodes."""
    d = np.asarray(direction, dtype=float)
    if abs(np.hypot(d[0], d[1]) - 1.0) > 1e-12:
        raise SystemError(f"plane-wave direction must be a unit vector, got {tuple(d)}")
    phase = grid.points @ d
    u_in = np.exp(1j * k0 * phase)
    q_in = 1j * k0 * (grid.normals @ d) * u_in
    return u_in, q_in


def incident_point_source(source, k0, grid: Grid):
    """Fundamental-solution source at a point in the exterior domain."""
    from . import backend

    s = np.asarray(source, dtype=float)
    d = grid.points - s[None, :]
    r = np.hypot(d[:, 0], d[:, 1])
    if np.any(r < 1e-13):
        raise SystemError("point source lies on the boundary")
    h0, h1 = backend.hankel01(k0 * r)
    u_in = 0.25j * h0
    rn = (d[:, 0] * grid.normals[:, 0] + d[:, 1] * grid.normals[:, 1]) / r
    q_in = -0.25j * k0 * h1 * rn
    return u_in, q_in


@dataclass(frozen=True)
class OperatorBundle:
    """All layer-operator matrices a formulation can need at k0 and k1."""

    s0: OperatorMatrix
    d0: OperatorMatrix
    dstar0: OperatorMatrix
    n0: OperatorMatrix
    s1: OperatorMatrix
    d1: OperatorMatrix
    dstar1: OperatorMatrix

    @property
    def n(self):
        return self.s0.n


def assemble_bundle(params: ProblemParams, grid: Grid, order=1) -> OperatorBundle:
    ops0 = assemble_four(params.k0, grid, order=order)
    ops1 = assemble_four(params.k1, grid, order=order, kinds=("S", "D", "Dstar"))
    return OperatorBundle(s0=ops0["S"], d0=ops0["D"], dstar0=ops0["Dstar"], n0=ops0["N"],
                          s1=ops1["S"], d1=ops1["D"], dstar1=ops1["Dstar"])


def _bm_row_blocks(params: ProblemParams, ops: OperatorBundle):
    """Burton-Miller row at k0: [D - 1/2 + beta*N, -eps0(S + beta(D* + 1/2))]."""
    n = ops.n
    eye = np.eye(n)
    beta = complex(params.beta)
    m31 = ops.d0.entries - 0.5 * eye + beta * ops.n0.entries
    m32 = -params.eps0 * (ops.s0.entries + beta * (ops.dstar0.entries + 0.5 * eye))
    return m31, m32


@dataclass(frozen=True)
class MixedSystem:
    """Blocks of the 3N mixed system; identity diagonals are implicit."""

    params: ProblemParams
    m13: np.ndarray
    m23: np.ndarray
    m31: np.ndarray
    m32: np.ndarray
    b3: np.ndarray

    @property
    def n(self):
        return self.m13.shape[0]

    def full_matrix(self):
        n = self.n
        a = np.zeros((3 * n, 3 * n), dtype=complex)
        a[:n, :n] = np.eye(n)
        a[n:2 * n, n:2 * n] = np.eye(n)
        a[:n, 2 * n:] = self.m13
        a[n:2 * n, 2 * n:] = self.m23
        a[2 * n:, :n] = self.m31
        a[2 * n:, n:2 * n] = self.m32
        return a

    def full_rhs(self):
        return np.concatenate([np.zeros(self.n, dtype=complex),
                               np.zeros(self.n, dtype=complex), self.b3])


@dataclass(frozen=True)
class OrdinarySystem:
    """Blocks of the 2N ordinary Burton-Miller system."""

    params: ProblemParams
    a11: np.ndarray
    a12: np.ndarray
    a21: np.ndarray
    a22: np.ndarray
    rhs1: np.ndarray

    @property
    def n(self):
        return self.a11.shape[0]

    def full_matrix(self):
        return np.block([[self.a11, self.a12], [self.a21, self.a22]])

    def full_rhs(self):
        return np.concatenate([self.rhs1, np.zeros(self.n, dtype=complex)])


def _rhs_b3(params, grid, incident):
    if incident is None:
        return np.zeros(grid.n, dtype=complex)
    if isinstance(incident, IncidentField):
        u_in, q_in = incident.evaluate(params, grid)
    else:
        u_in, q_in = incident
    if u_in.shape[0] != grid.n:
        raise SystemError("incident field length does not match grid")
    return -u_in - complex(params.beta) * q_in


def build_mixed(params: ProblemParams, grid: Grid, ops: OperatorBundle,
                incident=None) -> MixedSystem:
    if ops.n != grid.n:
        raise SystemError(f"operator size {ops.n} does not match grid size {grid.n}")
    n = ops.n
    eye = np.eye(n)
    m13 = -ops.s1.entries
    m23 = -(1.0 / params.eps1) * (ops.dstar1.entries + 0.5 * eye)
    m31, m32 = _bm_row_blocks(params, ops)
    return MixedSystem(params=params, m13=m13, m23=m23, m31=m31, m32=m32,
                       b3=_rhs_b3(params, grid, incident))


def build_ordinary(params: ProblemParams, grid: Grid, ops: OperatorBundle,
                   incident=None) -> OrdinarySystem:
    """Ordinary system: BM row at k0 plus the interior trace identity at k1.

    The interior Green identity with q = (1/eps1) du1/dnu reads
    (D_{k1} + 1/2) u - eps1 S_{k1} q = 0, hence the eps1 factor on the
    (2,2) block.
    """
    if ops.n != grid.n:
        raise SystemError(f"operator size {ops.n} does not match grid size {grid.n}")
    n = ops.n
    eye = np.eye(n)
    a11, a12 = _bm_row_blocks(params, ops)
    a21 = ops.d1.entries + 0.5 * eye
    a22 = -params.eps1 * ops.s1.entries
    return OrdinarySystem(params=params, a11=a11, a12=a12, a21=a21, a22=a22,
                          rhs1=_rhs_b3(params, grid, incident))
