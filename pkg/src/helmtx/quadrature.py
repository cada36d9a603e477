"""Nystrom discretization of the four Helmholtz layer operators.

Two quadrature backends on the equispaced grid:

* ``order=1``: punctured trapezoidal rule with a one-point local
  correction on the diagonal.  Off-diagonal entries are pure kernel
  samples ``kernel(x_i, y_j) * jac_j * h`` (weak-admissibility
  compatible); the diagonal entry carries the correction weights that
  integrate the kernel's singular parts (log type for S, D, D*, plus a
  finite-part 1/sin^2 term for N) exactly against constants.  Observed
  orders on smooth data: O(h^3) for S, D, D*, O(h) for N.

* ``order=31``: high-order path for the eigensolver's dense backend,
  built from the spectral log-quadrature on periodic grids, with the
  hypersingular operator assembled through its tangential-derivative
  rewriting.  Converges super-algebraically on analytic data, which
  exceeds the O(h^8) target of this configuration.

Complex wavenumbers are supported throughout (principal branch).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import backend
from .geometry import Grid

EULER = 0.5772156649015328606

KINDS = ("S", "D", "Dstar", "N")
SUPPORTED_ORDERS = (1, 31)


class QuadratureError(ValueError):
    pass


class SingularPointError(ValueError):
    """Coincident source and target point in a kernel evaluation."""


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense Nystrom matrix of one layer operator at one wavenumber."""

    kind: str
    wavenumber: complex
    order: int
    entries: np.ndarray

    @property
    def n(self):
        return self.entries.shape[0]

    def apply(self, density):
        density = np.asarray(density)
        if density.shape[0] != self.n:
            raise QuadratureError(
                f"density length {density.shape[0]} does not match matrix size {self.n}")
        return self.entries @ density


def _check_k(k):
    k = complex(k)
    if k == 0:
        raise QuadratureError("wavenumber must be nonzero")
    return k


def kernel_eval(kind, k, x, y, nu_x=None, nu_y=None):
    """Pointwise kernel of S, D, D*, or N at wavenumber k.

    x, y: (..., 2) point arrays; nu_x, nu_y unit normals where the kind
    requires them.  Coincident points raise SingularPointError.
    """
    if kind not in KINDS:
        raise QuadratureError(f"unknown operator kind {kind!r}")
    k = _check_k(k)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    r = np.hypot(d[..., 0], d[..., 1])
    if np.any(r == 0.0):
        raise SingularPointError("kernel evaluated at coincident points")
    h0, h1 = backend.hankel01(k * r)
    if kind == "S":
        return 0.25j * h0
    if kind == "D":
        rny = (d[..., 0] * nu_y[..., 0] + d[..., 1] * nu_y[..., 1]) / r
        return 0.25j * k * h1 * rny
    if kind == "Dstar":
        rnx = (d[..., 0] * nu_x[..., 0] + d[..., 1] * nu_x[..., 1]) / r
        return -0.25j * k * h1 * rnx
    rnx = (d[..., 0] * nu_x[..., 0] + d[..., 1] * nu_x[..., 1]) / r
    rny = (d[..., 0] * nu_y[..., 0] + d[..., 1] * nu_y[..., 1]) / r
    nxny = nu_x[..., 0] * nu_y[..., 0] + nu_x[..., 1] * nu_y[..., 1]
    return 0.25j * k * (k * h0 * rnx * rny + (h1 / r) * (nxny - 2.0 * rnx * rny))


def _pair_geometry_arrays(pts, nu):
    dx = pts[:, None, 0] - pts[None, :, 0]
    dy = pts[:, None, 1] - pts[None, :, 1]
    r = np.hypot(dx, dy)
    np.fill_diagonal(r, 1.0)
    rnx = (dx * nu[:, None, 0] + dy * nu[:, None, 1]) / r
    rny = (dx * nu[None, :, 0] + dy * nu[None, :, 1]) / r
    nxny = nu[:, None, 0] * nu[None, :, 0] + nu[:, None, 1] * nu[None, :, 1]
    return r, rnx, rny, nxny


def _pair_geometry(grid: Grid):
    return _pair_geometry_arrays(grid.points, grid.normals)


def _symmetric_pair_eval(fn, r, k):
    """Evaluate an (f0(k r), f1(k r)) pair on a symmetric distance matrix,
    upper triangle only, mirrored."""
    n = r.shape[0]
    iu = np.triu_indices(n, 0)
    f0u, f1u = fn(k * r[iu])
    f0 = np.empty((n, n), dtype=np.complex128)
    f1 = np.empty((n, n), dtype=np.complex128)
    f0[iu] = f0u
    f1[iu] = f1u
    il = (iu[1], iu[0])
    f0[il] = f0u
    f1[il] = f1u
    return f0, f1


def _hankel_pair(r, k):
    return _symmetric_pair_eval(backend.hankel01, r, k)


def _diag_s(jac, h, k):
    wlog = 2.0 * h * np.log(h / (2.0 * np.pi))
    m1 = -jac / (4.0 * np.pi)
    m2 = jac * (0.25j - (EULER + np.log(k * jac / 2.0)) / (2.0 * np.pi))
    return h * m2 + wlog * m1


def _diag_n(jac, h, n_global, k):
    wlog = 2.0 * h * np.log(h / (2.0 * np.pi))
    c_log = -(k * k / (8.0 * np.pi)) * jac
    smooth = jac * (0.125j * k * k + k * k * (1.0 - 2.0 * EULER) / (8.0 * np.pi)
                    - (k * k / (4.0 * np.pi)) * np.log(k * jac / 2.0))
    w_fp = -h * (n_global * n_global - 1.0) / 12.0
    return h * smooth + wlog * c_log + w_fp / (2.0 * np.pi * jac)


def _p1_core(k, pts, nrm, jac, kappa, h, n_global, kinds):
    """p=1 corrected matrices on a (sub)set of grid nodes as collocation
    and integration points; the diagonal carries the local correction."""
    r, rnx, rny, nxny = _pair_geometry_arrays(pts, nrm)
    h0, h1 = _hankel_pair(r, k)
    wj = h * jac[None, :]
    out = {}
    if "S" in kinds:
        a = 0.25j * h0 * wj
        np.fill_diagonal(a, _diag_s(jac, h, k))
        out["S"] = a
    if "D" in kinds:
        a = 0.25j * k * h1 * rny * wj
        np.fill_diagonal(a, -h * kappa * jac / (4.0 * np.pi))
        out["D"] = a
    if "Dstar" in kinds:
        a = -0.25j * k * h1 * rnx * wj
        np.fill_diagonal(a, -h * kappa * jac / (4.0 * np.pi))
        out["Dstar"] = a
    if "N" in kinds:
        a = 0.25j * k * (k * h0 * rnx * rny + (h1 / r) * (nxny - 2.0 * rnx * rny)) * wj
        np.fill_diagonal(a, _diag_n(jac, h, n_global, k))
        out["N"] = a
    return out


def _assemble_p1(k, grid, kinds):
    return _p1_core(k, grid.points, grid.normals, grid.jacobians, grid.curvature,
                    grid.h, grid.n, kinds)


def assemble_four_sub(k, grid, idx, kinds=KINDS):
    """p=1 operator blocks restricted to grid nodes idx (rows and columns).

    Entries match the corresponding submatrix of the full assembled
    operator exactly: pure kernel samples off the diagonal, the local
    correction on it.
    """
    k = _check_k(k)
    idx = np.asarray(idx, dtype=int)
    return _p1_core(k, grid.points[idx], grid.normals[idx], grid.jacobians[idx],
                    grid.curvature[idx], grid.h, grid.n, set(kinds))


def log_quadrature_weights(n):
    """Convolution weights for int_0^2pi log(4 sin^2((t-s)/2)) f(s) ds.

    Exact on trigonometric polynomials of degree < n/2; returned as the
    circulant first column R with rule sum_j R[(i-j) mod n] f(t_j).
    """
    freqs = np.fft.fftfreq(n, d=1.0 / n)
    sym = np.zeros(n)
    nz = freqs != 0
    sym[nz] = -2.0 * np.pi / np.abs(freqs[nz])
    return np.real(np.fft.ifft(sym))


@lru_cache(maxsize=8)
def _log_weight_matrix(n):
    col = log_quadrature_weights(n)
    i = np.arange(n)
    m = col[(i[:, None] - i[None, :]) % n]
    m.setflags(write=False)
    return m


@lru_cache(maxsize=8)
def spectral_diff_matrix(n):
    """Differentiation matrix of the trigonometric interpolant (even n)."""
    i = np.arange(n)
    diff = i[:, None] - i[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        m = 0.5 * (-1.0) ** diff / np.tan(np.pi * diff / n)
    np.fill_diagonal(m, 0.0)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=8)
def _log_sin_matrix(n):
    tt = 2.0 * np.pi * np.arange(n) / n
    sinmat = 2.0 * np.sin(0.5 * (tt[:, None] - tt[None, :]))
    lnmat = np.log(np.maximum(sinmat * sinmat, 1e-300))
    np.fill_diagonal(lnmat, 0.0)
    lnmat.setflags(write=False)
    return lnmat


def _assemble_spectral(k, grid, kinds):
    n, h, jac, kappa = grid.n, grid.h, grid.jacobians, grid.curvature
    r, rnx, rny, nxny = _pair_geometry(grid)
    h0, h1 = _hankel_pair(r, k)
    j0, j1 = _symmetric_pair_eval(backend.besselj01, r, k)
    lnmat = _log_sin_matrix(n)
    rmat = _log_weight_matrix(n)
    wj = jac[None, :]

    def log_assembled(cmat, smooth, diag_c, diag_smooth):
        np.fill_diagonal(cmat, diag_c)
        np.fill_diagonal(smooth, diag_smooth)
        return rmat * cmat + h * smooth

    m2 = jac * (0.25j - (EULER + np.log(k * jac / 2.0)) / (2.0 * np.pi))

    def s_like(scale):
        """Single-layer type operator with an extra smooth factor."""
        c = -(1.0 / (4.0 * np.pi)) * j0 * scale * wj
        full = 0.25j * h0 * scale * wj
        smooth = full - c * lnmat
        return log_assembled(c, smooth, -jac / (4.0 * np.pi), m2)

    out = {}
    need_s = "S" in kinds or "N" in kinds
    smat = s_like(1.0) if need_s else None
    if "S" in kinds:
        out["S"] = smat
    if "D" in kinds:
        c = -(k / (4.0 * np.pi)) * j1 * rny * wj
        full = 0.25j * k * h1 * rny * wj
        smooth = full - c * lnmat
        out["D"] = log_assembled(c, smooth, 0.0, -kappa * jac / (4.0 * np.pi))
    if "Dstar" in kinds:
        c = (k / (4.0 * np.pi)) * j1 * rnx * wj
        full = -0.25j * k * h1 * rnx * wj
        smooth = full - c * lnmat
        out["Dstar"] = log_assembled(c, smooth, 0.0, -kappa * jac / (4.0 * np.pi))
    if "N" in kinds:
        sbar_c = -(1.0 / (4.0 * np.pi)) * j0 * nxny * wj
        sbar_full = 0.25j * h0 * nxny * wj
        sbar_smooth = sbar_full - sbar_c * lnmat
        sbar = log_assembled(sbar_c, sbar_smooth, -jac / (4.0 * np.pi), m2)
        dm = spectral_diff_matrix(n) / jac[:, None]
        out["N"] = dm @ smat @ dm + k * k * sbar
    return out


def assemble_four(k, grid, order=1, kinds=KINDS):
    """Assemble several operator kinds at one wavenumber, sharing kernel data."""
    k = _check_k(k)
    if order not in SUPPORTED_ORDERS:
        raise QuadratureError(f"unsupported correction order {order}; supported: {SUPPORTED_ORDERS}")
    if grid.n <= 2 * order:
        raise QuadratureError(f"grid with {grid.n} nodes too small for order {order}")
    for kind in kinds:
        if kind not in KINDS:
            raise QuadratureError(f"unknown operator kind {kind!r}")
    fn = _assemble_p1 if order == 1 else _assemble_spectral
    mats = fn(k, grid, set(kinds))
    return {kind: OperatorMatrix(kind=kind, wavenumber=k, order=order, entries=mats[kind])
            for kind in kinds}


def assemble(kind, k, grid, order=1):
    """Assemble one operator matrix (see assemble_four)."""
    return assemble_four(k, grid, order=order, kinds=(kind,))[kind]


def layer_blocks(term_groups, xpts, xnrm, ypts, ynrm, yw):
    """Weighted layer-kernel combinations between disjoint point sets.

    term_groups: list of groups, each an iterable of (kind, k, coeff);
    returns one matrix sum_c coeff * kernel * yw_j per group.  Distances
    and the Hankel pair per distinct wavenumber are evaluated once and
    shared across all groups.
    """
    dx = xpts[:, None, 0] - ypts[None, :, 0]
    dy = xpts[:, None, 1] - ypts[None, :, 1]
    r = np.hypot(dx, dy)
    if np.min(r) <= 0.0:
        raise SingularPointError("layer_blocks requires disjoint point sets")
    all_terms = [t for g in term_groups for t in g]
    rnx = rny = nxny = None
    if any(t[0] in ("Dstar", "N") for t in all_terms):
        rnx = (dx * xnrm[:, None, 0] + dy * xnrm[:, None, 1]) / r
    if any(t[0] in ("D", "N") for t in all_terms):
        rny = (dx * ynrm[None, :, 0] + dy * ynrm[None, :, 1]) / r
    if any(t[0] == "N" for t in all_terms):
        nxny = xnrm[:, None, 0] * ynrm[None, :, 0] + xnrm[:, None, 1] * ynrm[None, :, 1]
    hankel = {}
    for _, k, _ in all_terms:
        kk = complex(k)
        if kk not in hankel:
            hankel[kk] = backend.hankel01(kk * r)
    out = []
    for terms in term_groups:
        acc = np.zeros((xpts.shape[0], ypts.shape[0]), dtype=complex)
        for kind, k, coeff in terms:
            k = complex(k)
            h0, h1 = hankel[k]
            if kind == "S":
                acc += (coeff * 0.25j) * h0
            elif kind == "D":
                acc += (coeff * 0.25j * k) * h1 * rny
            elif kind == "Dstar":
                acc += (-coeff * 0.25j * k) * h1 * rnx
            elif kind == "N":
                acc += (coeff * 0.25j * k) * (k * h0 * rnx * rny
                                              + (h1 / r) * (nxny - 2.0 * rnx * rny))
            else:
                raise QuadratureError(f"unknown kind {kind!r}")
        out.append(acc * yw[None, :])
    return out


def layer_block(terms, xpts, xnrm, ypts, ynrm, yw):
    """Single weighted layer-kernel combination (see layer_blocks)."""
    return layer_blocks([terms], xpts, xnrm, ypts, ynrm, yw)[0]


def dump_operator(mat: OperatorMatrix, path):
    """Write entries as row-major little-endian complex128."""
    mat.entries.astype("<c16").tofile(path)
