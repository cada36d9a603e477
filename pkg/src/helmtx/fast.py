"""Skeletonization-based fast direct solver with weak admissibility.

The boundary unknowns are split into 2^L contiguous leaf cells.  Every
off-diagonal block of the blocked system is compressed through the proxy
method: per cell and per unknown block, column-pivoted QR of small
proxy-interaction matrices yields interpolative factors L_i, R_i and
skeleton index subsets, so A_ij ~= L_i S_ij R_j for all j != i.  The
compressed p-cell system has dense per-cell diagonal blocks
{R_i A_ii^{-1} L_i}^{-1} and pure skeleton-interaction off-diagonal
blocks; the leaf A_ii^{-1} uses the structured block LU of the mixed
formulation (Cor. 4.2/4.3 paths), upper levels a generic dense LU.
Multi-level: sibling cells merge, their skeletons are re-skeletonized
against parent proxy circles, and the same compression recurses.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from threadpoolctl import threadpool_limits

from . import direct
from .geometry import Grid
from .quadrature import assemble_four_sub, layer_block, layer_blocks
from .systems import IncidentField, ProblemParams


class FastSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class FastConfig:
    leaf_size: int = 128
    skeleton_count: int = 40
    growth: float = 1.15
    proxy_factor: float = 1.5
    proxy_points: int = None       # default max(64, 2k)
    rank_tol: float = None         # optional tolerance-based truncation
    formulation: str = "mixed"
    threads: int = 2               # cell-level parallelism (levels are barriers)


@dataclass(frozen=True)
class IndexTree:
    """Perfect binary tree over contiguous index ranges (root is level 0)."""

    n: int
    leaf_size: int
    levels: int

    @property
    def leaf_count(self):
        return 2 ** self.levels

    def leaf_range(self, i):
        return i * self.leaf_size, (i + 1) * self.leaf_size

    def leaf_indices(self, i):
        lo, hi = self.leaf_range(i)
        return np.arange(lo, hi)


def build_tree(n, leaf_size) -> IndexTree:
    n, leaf_size = int(n), int(leaf_size)
    if leaf_size <= 0 or n % leaf_size:
        raise FastSolverError(f"N = {n} is not a multiple of the leaf size {leaf_size}")
    p = n // leaf_size
    levels = int(round(np.log2(p)))
    if 2 ** levels != p or levels < 1:
        raise FastSolverError(f"N / leaf size = {p} must be 2^L with L >= 1")
    return IndexTree(n=n, leaf_size=leaf_size, levels=levels)


@dataclass
class PointSet:
    idx: np.ndarray      # global node indices
    pts: np.ndarray      # (m, 2)
    nrm: np.ndarray      # (m, 2)
    w: np.ndarray        # integration weights jac * h

    def take(self, sel):
        return PointSet(self.idx[sel], self.pts[sel], self.nrm[sel], self.w[sel])

    @property
    def m(self):
        return self.idx.shape[0]


def _grid_pointset(grid: Grid, idx):
    return PointSet(idx=np.asarray(idx, dtype=int), pts=grid.points[idx],
                    nrm=grid.normals[idx], w=grid.h * grid.jacobians[idx])


# ---------------------------------------------------------------------------
# Formulation adapters
# ---------------------------------------------------------------------------
class MixedFormulation:
    """3x3 block structure of the mixed direct-indirect system."""

    ntypes = 3
    label = "mixed"

    def __init__(self, params: ProblemParams):
        self.params = params
        k0, k1, beta = params.k0, params.k1, complex(params.beta)
        eps0, eps1 = params.eps0, params.eps1
        self.blocks = {
            (0, 2): [("S", k1, -1.0)],
            (1, 2): [("Dstar", k1, -1.0 / eps1)],
            (2, 0): [("D", k0, 1.0), ("N", k0, beta)],
            (2, 1): [("S", k0, -eps0), ("Dstar", k0, -eps0 * beta)],
        }
        # Column-pivoted QR targets: rows hitting each column type ...
        self.r_targets = {
            0: [[("D", k0, 1.0), ("N", k0, beta)]],
            1: [[("S", k0, 1.0), ("Dstar", k0, beta)]],
            2: [[("S", k1, 1.0)]],
        }
        # ... and conjugate-transposed row-side targets per row type.
        self.l_targets = {
            0: [[("S", k1, 1.0)]],
            1: [[("Dstar", k1, 1.0)]],
            2: [[("D", k0, 1.0), ("N", k0, beta)],
                [("S", k0, -eps0), ("Dstar", k0, -eps0 * beta)]],
        }

    def qr_unit_flops(self, nprime, n, counter):
        for _ in range(5):
            counter.qr(nprime, n)
        counter.qr(2 * nprime, n)

    def leaf_blocks(self, grid, idx):
        p = self.params
        ops0 = assemble_four_sub(p.k0, grid, idx)
        ops1 = assemble_four_sub(p.k1, grid, idx, kinds=("S", "Dstar"))
        eye = np.eye(len(idx))
        beta = complex(p.beta)
        m13 = -ops1["S"]
        m23 = -(1.0 / p.eps1) * (ops1["Dstar"] + 0.5 * eye)
        m31 = ops0["D"] - 0.5 * eye + beta * ops0["N"]
        m32 = -p.eps0 * (ops0["S"] + beta * (ops0["Dstar"] + 0.5 * eye))
        return m13, m23, m31, m32

    def leaf_inverse(self, grid, idx, counter):
        m13, m23, m31, m32 = self.leaf_blocks(grid, idx)
        fact = direct.factor_mixed_blocks(m13, m23, m31, m32,
                                          omega=complex(self.params.omega), counter=counter)
        return _MixedLeafInverse(fact)

    def leaf_rhs(self, b_cell):
        m = b_cell.shape[0]
        z = np.zeros(m, dtype=complex)
        return np.concatenate([z, z, b_cell])


class _MixedLeafInverse:
    def __init__(self, fact):
        self.fact = fact
        self.m = fact.n

    def solve_stacked(self, x):
        m = self.m
        x1, x2, x3 = self.fact_solve_args(x)
        y1, y2, y3 = direct.solve_mixed_general(self.fact, x1, x2, x3)
        return np.concatenate([y1, y2, y3], axis=0)

    def fact_solve_args(self, x):
        m = self.m
        return x[:m], x[m:2 * m], x[2 * m:]

    def solve_blockdiag(self, bs):
        x = direct.solve_mixed_blockdiag(self.fact, *bs)
        return np.block(x)

    def dense(self):
        f = self.fact
        m = f.n
        eye = np.eye(m)
        zero = np.zeros((m, m))
        return np.block([[eye, zero, f.m13],
                         [zero, eye, f.m23],
                         [f.m31, f.m32, zero]])


class OrdinaryFormulation:
    """2x2 block structure of the ordinary Burton-Miller system."""

    ntypes = 2
    label = "ordinary"

    def __init__(self, params: ProblemParams):
        self.params = params
        k0, k1, beta = params.k0, params.k1, complex(params.beta)
        eps0, eps1 = params.eps0, params.eps1
        bm_row = [("D", k0, 1.0), ("N", k0, beta)]
        bm_row2 = [("S", k0, -eps0), ("Dstar", k0, -eps0 * beta)]
        self.blocks = {
            (0, 0): bm_row,
            (0, 1): bm_row2,
            (1, 0): [("D", k1, 1.0)],
            (1, 1): [("S", k1, -eps1)],
        }
        self.r_targets = {
            0: [bm_row, [("D", k1, 1.0)]],
            1: [bm_row2, [("S", k1, -eps1)]],
        }
        self.l_targets = {
            0: [bm_row, bm_row2],
            1: [[("D", k1, 1.0)], [("S", k1, -eps1)]],
        }

    def qr_unit_flops(self, nprime, n, counter):
        for _ in range(4):
            counter.qr(2 * nprime, n)

    def leaf_dense(self, grid, idx):
        p = self.params
        ops0 = assemble_four_sub(p.k0, grid, idx)
        ops1 = assemble_four_sub(p.k1, grid, idx, kinds=("S", "D"))
        eye = np.eye(len(idx))
        beta = complex(p.beta)
        a11 = ops0["D"] - 0.5 * eye + beta * ops0["N"]
        a12 = -p.eps0 * (ops0["S"] + beta * (ops0["Dstar"] + 0.5 * eye))
        a21 = ops1["D"] + 0.5 * eye
        a22 = -p.eps1 * ops1["S"]
        return np.block([[a11, a12], [a21, a22]])

    def leaf_inverse(self, grid, idx, counter):
        a = self.leaf_dense(grid, idx)
        return _DenseInverse(a, counter)

    def leaf_rhs(self, b_cell):
        return np.concatenate([b_cell, np.zeros_like(b_cell)])


class _DenseInverse:
    def __init__(self, a, counter):
        self.matrix = a
        self.counter = counter
        self.lu = sla.lu_factor(a.copy(), check_finite=False)
        counter.lu(a.shape[0])

    @property
    def m(self):
        return self.matrix.shape[0]

    def solve_stacked(self, x):
        nrhs = 1 if x.ndim == 1 else x.shape[1]
        self.counter.lu_solve(self.m, nrhs)
        return sla.lu_solve(self.lu, x, check_finite=False)

    def solve_blockdiag(self, bs):
        total = sum(b.shape[1] for b in bs)
        rhs = np.zeros((self.m, total), dtype=complex)
        r0 = c0 = 0
        for b in bs:
            rhs[r0:r0 + b.shape[0], c0:c0 + b.shape[1]] = b
            r0 += b.shape[0]
            c0 += b.shape[1]
        return self.solve_stacked(rhs)

    def dense(self):
        return self.matrix


def make_formulation(params, name):
    if name == "mixed":
        return MixedFormulation(params)
    if name == "ordinary":
        return OrdinaryFormulation(params)
    raise FastSolverError(f"unknown formulation {name!r}")


# ---------------------------------------------------------------------------
# Cells and kernel blocks
# ---------------------------------------------------------------------------
@dataclass
class Cell:
    rows: list          # PointSet per row type
    cols: list          # PointSet per column type
    inv: object = None  # diagonal-block inverse applier

    @property
    def type_sizes(self):
        return [c.m for c in self.cols]

    @property
    def dim(self):
        return sum(self.type_sizes)

    def all_row_points(self):
        return _dedup_pointsets(self.rows)

    def all_col_points(self):
        return _dedup_pointsets(self.cols)


def _dedup_pointsets(sets):
    idx = np.concatenate([s.idx for s in sets])
    pts = np.concatenate([s.pts for s in sets])
    nrm = np.concatenate([s.nrm for s in sets])
    w = np.concatenate([s.w for s in sets])
    _, keep = np.unique(idx, return_index=True)
    return PointSet(idx[keep], pts[keep], nrm[keep], w[keep])


def kernel_block(fmt, row_sets, col_sets):
    """Off-diagonal system block between two cells (pure kernel samples)."""
    msizes = [s.m for s in row_sets]
    nsizes = [s.m for s in col_sets]
    out = np.zeros((sum(msizes), sum(nsizes)), dtype=complex)
    roff = np.concatenate([[0], np.cumsum(msizes)])
    coff = np.concatenate([[0], np.cumsum(nsizes)])
    entries = sorted(fmt.blocks)
    same = all(s is row_sets[0] for s in row_sets) \
        and all(s is col_sets[0] for s in col_sets)
    if same:
        rs, cs = row_sets[0], col_sets[0]
        mats = layer_blocks([fmt.blocks[e] for e in entries],
                            rs.pts, rs.nrm, cs.pts, cs.nrm, cs.w)
        for (rt, ct), mat in zip(entries, mats):
            out[roff[rt]:roff[rt + 1], coff[ct]:coff[ct + 1]] = mat
        return out
    for rt, ct in entries:
        rs, cs = row_sets[rt], col_sets[ct]
        out[roff[rt]:roff[rt + 1], coff[ct]:coff[ct + 1]] = layer_block(
            fmt.blocks[(rt, ct)], rs.pts, rs.nrm, cs.pts, cs.nrm, cs.w)
    return out


# ---------------------------------------------------------------------------
# Proxy skeletonization
# ---------------------------------------------------------------------------
@dataclass
class CellFactors:
    """Interpolative factors of one cell: per type t, R[t] (k x m) maps full
    columns onto skeleton columns, L[t] (m x k) interpolates rows."""

    r_mats: list
    l_mats: list
    row_skel: list      # PointSet per type
    col_skel: list
    skeleton_count: int


def _proxy_circle(pts, factor, n_proxy):
    center = pts.mean(axis=0)
    d = pts[:, None, :] - pts[None, :, :]
    diam = np.sqrt(np.max(d[..., 0] ** 2 + d[..., 1] ** 2))
    if diam <= 0.0:
        raise FastSolverError("cell has zero diameter; cannot build proxy circle")
    rad = max(0.5 * factor * diam, 1.05 * np.max(np.hypot(*(pts - center).T)))
    ang = 2.0 * np.pi * np.arange(n_proxy) / n_proxy
    ppts = center[None, :] + rad * np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    pnrm = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    pw = np.full(n_proxy, 2.0 * np.pi * rad / n_proxy)
    proxy = PointSet(idx=np.full(n_proxy, -1), pts=ppts, nrm=pnrm, w=pw)
    return proxy, center, rad


def _inside(ps: PointSet, center, rad):
    keep = np.hypot(ps.pts[:, 0] - center[0], ps.pts[:, 1] - center[1]) < rad
    return ps.take(keep)


def _append_sets(a: PointSet, b: PointSet):
    return PointSet(np.concatenate([a.idx, b.idx]), np.concatenate([a.pts, b.pts]),
                    np.concatenate([a.nrm, b.nrm]), np.concatenate([a.w, b.w]))


def _interp_from_cpqr(rfac, piv, k):
    """ID interpolation matrix from a pivoted-QR triangular factor.

    The identity block at the skeleton columns is written explicitly, so
    the interpolation property holds exactly there.
    """
    m = rfac.shape[1]
    k = min(k, rfac.shape[0], m)
    diag = np.abs(np.diagonal(rfac))
    if diag[0] == 0.0:
        return 0, np.zeros((0, m), dtype=complex), piv[:0]
    while k > 1 and diag[k - 1] < 1e-14 * diag[0]:
        k -= 1
    out = np.zeros((k, m), dtype=complex)
    out[np.arange(k), piv[:k]] = 1.0
    if m > k:
        out[:, piv[k:]] = sla.solve_triangular(rfac[:k, :k], rfac[:k, k:],
                                               check_finite=False)
    return k, out, piv[:k]


def _targets_per_type(groups_per_type, xsets_fixedside, builder):
    """Assemble the per-type CPQR targets, batching the kernel evaluation
    whenever the per-type own point sets coincide (always true at leaves)."""
    ntypes = len(groups_per_type)
    if all(s is xsets_fixedside[0] for s in xsets_fixedside):
        flat = [g for groups in groups_per_type for g in groups]
        mats = builder(flat, xsets_fixedside[0])
        out = []
        pos = 0
        for groups in groups_per_type:
            out.append(mats[pos:pos + len(groups)])
            pos += len(groups)
        return out
    return [builder(groups_per_type[t], xsets_fixedside[t]) for t in range(ntypes)]


def skeletonize_cell(fmt, cell: Cell, near_rows: PointSet, near_cols: PointSet,
                     k_target, cfg: FastConfig, counter) -> CellFactors:
    """Proxy-method CPQR skeletonization of one cell, all unknown types."""
    own = cell.all_col_points()
    n_proxy = cfg.proxy_points or max(64, 2 * k_target)
    proxy, center, rad = _proxy_circle(own.pts, cfg.proxy_factor, n_proxy)
    rows_aug = _append_sets(proxy, _inside(near_rows, center, rad))
    cols_aug = _append_sets(proxy, _inside(near_cols, center, rad))

    r_groups = [fmt.r_targets[t] for t in range(fmt.ntypes)]
    r_mats_all = _targets_per_type(
        r_groups, cell.cols,
        lambda flat, cs: layer_blocks(flat, rows_aug.pts, rows_aug.nrm,
                                      cs.pts, cs.nrm, cs.w))
    l_groups = [fmt.l_targets[t] for t in range(fmt.ntypes)]
    l_mats_all = _targets_per_type(
        l_groups, cell.rows,
        lambda flat, rs: layer_blocks(flat, rs.pts, rs.nrm,
                                      cols_aug.pts, cols_aug.nrm, cols_aug.w))

    qrs = []
    for t in range(fmt.ntypes):
        cs = cell.cols[t]
        target = np.vstack(r_mats_all[t])
        counter.qr(target.shape[0], target.shape[1])
        rfac, piv = sla.qr(target, mode="r", pivoting=True, check_finite=False)
        qrs.append(("r", t, rfac, piv, cs.m))
        rs = cell.rows[t]
        target = np.hstack(l_mats_all[t]).conj().T
        counter.qr(target.shape[0], target.shape[1])
        rfac, piv = sla.qr(target, mode="r", pivoting=True, check_finite=False)
        qrs.append(("l", t, rfac, piv, rs.m))

    k_cell = min(k_target, min(q[4] for q in qrs))
    if cfg.rank_tol is not None:
        for _, _, rfac, _, _ in qrs:
            diag = np.abs(np.diagonal(rfac))
            ranks = np.sum(diag > cfg.rank_tol * diag[0])
            k_cell = min(k_cell, max(int(ranks), 1))
    r_mats = [None] * fmt.ntypes
    l_mats = [None] * fmt.ntypes
    row_skel = [None] * fmt.ntypes
    col_skel = [None] * fmt.ntypes
    ks = []
    for side, t, rfac, piv, m in qrs:
        k_eff, interp, sk = _interp_from_cpqr(rfac, piv, k_cell)
        ks.append(k_eff)
    k_cell = min(ks)
    for side, t, rfac, piv, m in qrs:
        _, interp, sk = _interp_from_cpqr(rfac, piv, k_cell)
        if side == "r":
            r_mats[t] = interp
            col_skel[t] = cell.cols[t].take(sk)
        else:
            l_mats[t] = interp.conj().T
            row_skel[t] = cell.rows[t].take(sk)
    return CellFactors(r_mats=r_mats, l_mats=l_mats, row_skel=row_skel,
                       col_skel=col_skel, skeleton_count=k_cell)


def skeletonize_leaf(grid, params, tree, i, cfg: FastConfig, counter=None):
    """Leaf-level skeletonization of cell i (exposed for verification)."""
    fmt = make_formulation(params, cfg.formulation)
    counter = counter if counter is not None else direct.FlopCounter()
    cells = [_leaf_cell(grid, tree, j, fmt) for j in range(tree.leaf_count)]
    near_r, near_c = _near_sets(cells, i)
    return skeletonize_cell(fmt, cells[i], near_r, near_c, cfg.skeleton_count, cfg, counter)


def _leaf_cell(grid, tree, i, fmt):
    ps = _grid_pointset(grid, tree.leaf_indices(i))
    return Cell(rows=[ps] * fmt.ntypes, cols=[ps] * fmt.ntypes)


def _near_sets(cells, i):
    p = len(cells)
    left, right = cells[(i - 1) % p], cells[(i + 1) % p]
    if p == 2:
        neigh = [left]
    else:
        neigh = [left, right]
    near_rows = _dedup_pointsets([c.all_row_points() for c in neigh])
    near_cols = _dedup_pointsets([c.all_col_points() for c in neigh])
    return near_rows, near_cols


# ---------------------------------------------------------------------------
# Compression and solve
# ---------------------------------------------------------------------------
def _blockdiag(mats):
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=complex)
    r0 = c0 = 0
    for m in mats:
        out[r0:r0 + m.shape[0], c0:c0 + m.shape[1]] = m
        r0 += m.shape[0]
        c0 += m.shape[1]
    return out


@dataclass
class _CompressedCell:
    factors: CellFactors
    v: np.ndarray        # A_ii^{-1} L_i
    w_inv: np.ndarray    # G_i = (R_i A_ii^{-1} L_i)^{-1}
    w_sol: np.ndarray    # A_ii^{-1} f_i
    cr: np.ndarray       # compressed rhs block G_i R_i w_sol
    cell: Cell


def _compress_cells(fmt, cells, rhs, cfg, k_target, counter):
    def one(i):
        cell = cells[i]
        near_r, near_c = _near_sets(cells, i)
        fac = skeletonize_cell(fmt, cell, near_r, near_c, k_target, cfg, counter)
        rmat = _blockdiag(fac.r_mats)
        v = cell.inv.solve_blockdiag(fac.l_mats)
        w = rmat @ v
        counter.gemm(w.shape[0], w.shape[1], v.shape[0])
        g = np.linalg.inv(w)
        counter.lu(w.shape[0])
        w_sol = cell.inv.solve_stacked(rhs[i])
        cr = g @ (rmat @ w_sol)
        return _CompressedCell(factors=fac, v=v, w_inv=g, w_sol=w_sol, cr=cr,
                               cell=cell)

    return _cell_map(one, len(cells), cfg)


def _cell_map(fn, count, cfg):
    """Map over cells on a small thread pool, BLAS pinned to one thread to
    avoid oversubscription; output order is fixed (deterministic results
    for a fixed thread count)."""
    if cfg.threads <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with threadpool_limits(limits=1):
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(fn, range(count)))


def _merge_perm(sizes_a, sizes_b):
    """Permutation from child-stacked [a; b] ordering to type-major parent order."""
    total_a, total_b = sum(sizes_a), sum(sizes_b)
    perm = []
    off_a = 0
    off_b = total_a
    for ka, kb in zip(sizes_a, sizes_b):
        perm.extend(range(off_a, off_a + ka))
        perm.extend(range(off_b, off_b + kb))
        off_a += ka
        off_b += kb
    return np.asarray(perm, dtype=int)


def _solve_blocked(fmt, cells, rhs, cfg, k_target, counter, stats, level):
    p = len(cells)
    t0 = time.perf_counter()
    if p == 2:
        a, b = cells
        k12 = kernel_block(fmt, a.rows, b.cols)
        k21 = kernel_block(fmt, b.rows, a.cols)
        v = a.inv.solve_stacked(k12)
        w1 = a.inv.solve_stacked(rhs[0])
        schur = b.inv.dense() - k21 @ v
        counter.gemm(k21.shape[0], v.shape[1], k21.shape[1])
        counter.lu(schur.shape[0])
        x2 = np.linalg.solve(schur, rhs[1] - k21 @ w1)
        x1 = w1 - v @ x2
        stats["levels"].append({"level": level, "cells": 2, "dofs": int(a.dim + b.dim),
                                "wall_seconds": time.perf_counter() - t0})
        return [x1, x2]

    comp = _compress_cells(fmt, cells, rhs, cfg, k_target, counter)
    kmax = max(c.factors.skeleton_count for c in comp)
    stats["levels"].append({
        "level": level, "cells": p, "skeletons": kmax,
        "dofs": int(sum(sum(s.m for s in c.factors.col_skel) for c in comp)),
        "wall_seconds": time.perf_counter() - t0,
    })

    parents = []
    parent_rhs = []
    perms = []
    for j in range(p // 2):
        a, b = comp[2 * j], comp[2 * j + 1]
        rows = [
            _append_sets(a.factors.row_skel[t], b.factors.row_skel[t])
            for t in range(fmt.ntypes)
        ]
        cols = [
            _append_sets(a.factors.col_skel[t], b.factors.col_skel[t])
            for t in range(fmt.ntypes)
        ]
        kab = kernel_block(fmt, [s for s in a.factors.row_skel],
                           [s for s in b.factors.col_skel])
        kba = kernel_block(fmt, [s for s in b.factors.row_skel],
                           [s for s in a.factors.col_skel])
        dmat = np.block([[a.w_inv, kab], [kba, b.w_inv]])
        perm = _merge_perm([s.m for s in a.factors.col_skel],
                           [s.m for s in b.factors.col_skel])
        dmat = dmat[np.ix_(perm, perm)]
        parents.append(Cell(rows=rows, cols=cols, inv=_DenseInverse(dmat, counter)))
        parent_rhs.append(np.concatenate([a.cr, b.cr])[perm])
        perms.append(perm)

    upper = _solve_blocked(fmt, parents, parent_rhs, cfg,
                           _next_k(k_target, cfg), counter, stats, level - 1)

    ys = []
    for j in range(p // 2):
        a, b = comp[2 * j], comp[2 * j + 1]
        stacked = np.empty_like(upper[j])
        stacked[perms[j]] = upper[j]
        dim_a = sum(s.m for s in a.factors.col_skel)
        for c, ytil in ((a, stacked[:dim_a]), (b, stacked[dim_a:])):
            ghat = c.cr - c.w_inv @ ytil
            ys.append(c.w_sol - c.v @ ghat)
    return ys


def _next_k(k, cfg):
    return max(int(round(k * cfg.growth)), k + 1)


@dataclass
class FastResult:
    u: np.ndarray
    q: np.ndarray
    phi: np.ndarray
    stats: dict


def solve_fast(grid: Grid, params: ProblemParams, incident, cfg: FastConfig) -> FastResult:
    """Multi-level fast direct solve of the chosen formulation."""
    fmt = make_formulation(params, cfg.formulation)
    tree = build_tree(grid.n, cfg.leaf_size)
    counter = direct.FlopCounter()
    stats = {"levels": [], "formulation": fmt.label, "n": grid.n,
             "leaf_size": cfg.leaf_size, "skeletons": cfg.skeleton_count}
    t0 = time.perf_counter()

    if isinstance(incident, IncidentField):
        u_in, q_in = incident.evaluate(params, grid)
    else:
        u_in, q_in = incident
    b = -u_in - complex(params.beta) * q_in

    def make_leaf(i):
        cell = _leaf_cell(grid, tree, i, fmt)
        cell.inv = fmt.leaf_inverse(grid, tree.leaf_indices(i), counter)
        return cell

    cells = _cell_map(make_leaf, tree.leaf_count, cfg)
    rhs = [fmt.leaf_rhs(b[slice(*tree.leaf_range(i))])
           for i in range(tree.leaf_count)]

    stats["leaf_factor_seconds"] = time.perf_counter() - t0
    ys = _solve_blocked(fmt, cells, rhs, cfg, cfg.skeleton_count, counter, stats,
                        tree.levels)

    n, m = grid.n, tree.leaf_size
    u = np.zeros(n, dtype=complex)
    q = np.zeros(n, dtype=complex)
    phi = np.zeros(n, dtype=complex) if fmt.ntypes == 3 else None
    for i, y in enumerate(ys):
        sl = slice(*tree.leaf_range(i))
        u[sl] = y[:m]
        q[sl] = y[m:2 * m]
        if phi is not None:
            phi[sl] = y[2 * m:]
    stats["wall_seconds"] = time.perf_counter() - t0
    stats["flops_counted_units"] = counter.units
    stats["flops_counted_real"] = counter.real_flops
    return FastResult(u=u, q=q, phi=phi, stats=stats)


# ---------------------------------------------------------------------------
# Single-level compression (explicit compressed system)
# ---------------------------------------------------------------------------
@dataclass
class CompressedSystem:
    """Explicit single-level compressed system of dimension ntypes * k * p."""

    matrix: np.ndarray
    rhs: np.ndarray
    comp: list
    tree: IndexTree
    fmt: object

    @property
    def dim(self):
        return self.matrix.shape[0]


def build_compressed_single_level(grid, params, incident, cfg: FastConfig) -> CompressedSystem:
    fmt = make_formulation(params, cfg.formulation)
    tree = build_tree(grid.n, cfg.leaf_size)
    counter = direct.FlopCounter()
    if isinstance(incident, IncidentField):
        u_in, q_in = incident.evaluate(params, grid)
    else:
        u_in, q_in = incident
    b = -u_in - complex(params.beta) * q_in
    cells = []
    rhs = []
    for i in range(tree.leaf_count):
        cell = _leaf_cell(grid, tree, i, fmt)
        cell.inv = fmt.leaf_inverse(grid, tree.leaf_indices(i), counter)
        cells.append(cell)
        rhs.append(fmt.leaf_rhs(b[slice(*tree.leaf_range(i))]))
    comp = _compress_cells(fmt, cells, rhs, cfg, cfg.skeleton_count, counter)
    dims = [sum(s.m for s in c.factors.col_skel) for c in comp]
    offs = np.concatenate([[0], np.cumsum(dims)])
    total = int(offs[-1])
    mat = np.zeros((total, total), dtype=complex)
    vec = np.zeros(total, dtype=complex)
    for i, ci in enumerate(comp):
        mat[offs[i]:offs[i + 1], offs[i]:offs[i + 1]] = ci.w_inv
        vec[offs[i]:offs[i + 1]] = ci.cr
        for j, cj in enumerate(comp):
            if i == j:
                continue
            mat[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = kernel_block(
                fmt, ci.factors.row_skel, cj.factors.col_skel)
    return CompressedSystem(matrix=mat, rhs=vec, comp=comp, tree=tree, fmt=fmt)


def solve_compressed_single_level(cs: CompressedSystem):
    ytil = np.linalg.solve(cs.matrix, cs.rhs)
    dims = [sum(s.m for s in c.factors.col_skel) for c in cs.comp]
    offs = np.concatenate([[0], np.cumsum(dims)])
    tree, fmt = cs.tree, cs.fmt
    n, m = tree.n, tree.leaf_size
    u = np.zeros(n, dtype=complex)
    q = np.zeros(n, dtype=complex)
    phi = np.zeros(n, dtype=complex) if fmt.ntypes == 3 else None
    for i, c in enumerate(cs.comp):
        yt = ytil[offs[i]:offs[i + 1]]
        ghat = c.cr - c.w_inv @ yt
        y = c.w_sol - c.v @ ghat
        sl = slice(*tree.leaf_range(i))
        u[sl] = y[:m]
        q[sl] = y[m:2 * m]
        if phi is not None:
            phi[sl] = y[2 * m:]
    return u, q, phi


def skeletonization_flops(formulation, nprime, n):
    """Leading-order CPQR cost per cell of the proxy skeletonization."""
    if formulation == "mixed":
        return 14.0 * nprime * n * n - 4.0 * n**3
    if formulation == "ordinary":
        return 16.0 * nprime * n * n - (8.0 / 3.0) * n**3
    raise FastSolverError(f"unknown formulation {formulation!r}")
