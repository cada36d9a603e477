"""Structured block-LU direct solver for the mixed system, dense baseline
for the ordinary system, and flop accounting.

The mixed coefficient matrix has identity (1,1)/(2,2) blocks, zero
(1,2)/(2,1)/(3,3) blocks, so block elimination reduces a 3N solve to two
N x N matrix products plus one N x N LU of the Schur matrix
T = -M31 M13 - M32 M23, about (14/3) N^3 operations against (16/3) N^3
for a generic LU of the 2N ordinary system.
"""

import threading
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .systems import MixedSystem, OrdinarySystem


class ResonanceError(RuntimeError):
    """Schur matrix numerically singular; carries the offending omega."""

    def __init__(self, message, omega=None):
        super().__init__(message)
        self.omega = omega


PIVOT_BREAKDOWN = 1e-14
# complex op == 1 normalized unit == 4 real flops (mul+add pair)
REAL_FLOPS_PER_UNIT = 4


@dataclass
class FlopCounter:
    """Normalized complex-operation counter (gemm(n) = 2 n^3, LU(n) = 2/3 n^3).

    Thread-safe: callers accumulate from concurrent cell/contour workers.
    """

    units: float = 0.0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def _add(self, amount):
        with self._lock:
            self.units += amount

    def gemm(self, m, n, k):
        self._add(2.0 * m * n * k)

    def lu(self, n):
        self._add((2.0 / 3.0) * n**3)

    def lu_solve(self, n, nrhs=1):
        self._add(2.0 * n * n * nrhs)

    def gemv(self, m, n, nrhs=1):
        self._add(2.0 * m * n * nrhs)

    def qr(self, m, n):
        self._add(2.0 * m * n * n - (2.0 / 3.0) * n**3)

    @property
    def real_flops(self):
        return REAL_FLOPS_PER_UNIT * self.units


@dataclass(frozen=True)
class FlopReport:
    label: str
    counted_units: float
    theoretical_units: float

    @property
    def counted_real(self):
        return REAL_FLOPS_PER_UNIT * self.counted_units

    @property
    def ratio_to_theory(self):
        return self.counted_units / self.theoretical_units


def _lu_with_pivot_check(t, omega, counter):
    n = t.shape[0]
    lu, piv = sla.lu_factor(t, overwrite_a=True, check_finite=False)
    counter.lu(n)
    diag = np.abs(np.diagonal(lu))
    dmax = float(np.max(diag))
    dmin = float(np.min(diag))
    if dmax == 0.0 or dmin < PIVOT_BREAKDOWN * dmax:
        raise ResonanceError(
            f"Schur matrix numerically singular (pivot ratio {dmin / max(dmax, 1e-300):.2e})"
            + (f" at omega = {omega}" if omega is not None else ""),
            omega=omega)
    return (lu, piv), dmin, dmax


@dataclass
class MixedFactorization:
    """Stored blocks plus LU factors of the Schur matrix T = -M31 M13 - M32 M23."""

    m13: np.ndarray
    m23: np.ndarray
    m31: np.ndarray
    m32: np.ndarray
    lu: tuple
    min_pivot: float
    max_pivot: float
    omega: complex = None
    counter: FlopCounter = field(default_factory=FlopCounter)

    @property
    def n(self):
        return self.m13.shape[0]

    @property
    def pivot_ratio(self):
        return self.min_pivot / self.max_pivot

    def schur_solve(self, b):
        nrhs = 1 if b.ndim == 1 else b.shape[1]
        self.counter.lu_solve(self.n, nrhs)
        return sla.lu_solve(self.lu, b, check_finite=False)


def factor_mixed_blocks(m13, m23, m31, m32, omega=None, counter=None) -> MixedFactorization:
    """Factor a system given its four nontrivial blocks (used per leaf cell too)."""
    n = m13.shape[0]
    counter = counter if counter is not None else FlopCounter()
    t = -(m31 @ m13)
    t -= m32 @ m23
    counter.gemm(n, n, n)
    counter.gemm(n, n, n)
    lu, dmin, dmax = _lu_with_pivot_check(t, omega, counter)
    return MixedFactorization(m13=m13, m23=m23, m31=m31, m32=m32, lu=lu,
                              min_pivot=dmin, max_pivot=dmax, omega=omega, counter=counter)


def factor_mixed(system: MixedSystem, counter=None) -> MixedFactorization:
    return factor_mixed_blocks(system.m13, system.m23, system.m31, system.m32,
                               omega=complex(system.params.omega), counter=counter)


def solve_mixed(fact: MixedFactorization, b3):
    """Solve with rhs (0, 0, b3): u = -M13 x3, q = -M23 x3, phi = x3."""
    b3 = np.asarray(b3, dtype=complex)
    if b3.shape[0] != fact.n:
        raise ValueError(f"rhs length {b3.shape[0]} does not match N = {fact.n}")
    x3 = fact.schur_solve(b3)
    nrhs = 1 if b3.ndim == 1 else b3.shape[1]
    fact.counter.gemv(fact.n, fact.n, nrhs)
    fact.counter.gemv(fact.n, fact.n, nrhs)
    return -(fact.m13 @ x3), -(fact.m23 @ x3), x3


def solve_mixed_general(fact: MixedFactorization, b1, b2, b3):
    """Solve with arbitrary rhs (b1, b2, b3); vectors or column-stacked matrices."""
    b1 = np.asarray(b1, dtype=complex)
    b2 = np.asarray(b2, dtype=complex)
    b3 = np.asarray(b3, dtype=complex)
    if not (b1.shape == b2.shape == b3.shape) or b1.shape[0] != fact.n:
        raise ValueError("rhs blocks must share shape (N,) or (N, m)")
    nrhs = 1 if b1.ndim == 1 else b1.shape[1]
    z3 = fact.schur_solve(b3 - fact.m31 @ b1 - fact.m32 @ b2)
    fact.counter.gemv(fact.n, fact.n, 4 * nrhs)
    return b1 - fact.m13 @ z3, b2 - fact.m23 @ z3, z3


def solve_mixed_blockdiag(fact: MixedFactorization, b1, b2, b3):
    """Solve A X = blockdiag(B1, B2, B3); returns the 3 x 3 block array X.

    Bj may have zero columns; the corresponding block column is empty.
    """
    n = fact.n
    blocks = []
    for b in (b1, b2, b3):
        b = np.asarray(b, dtype=complex)
        if b.ndim != 2 or b.shape[0] != n:
            raise ValueError("block rhs must be N x c arrays")
        blocks.append(b)
    b1, b2, b3 = blocks
    c1, c2, c3 = (b.shape[1] for b in blocks)
    z31 = -fact.schur_solve(fact.m31 @ b1) if c1 else np.zeros((n, 0), dtype=complex)
    z32 = -fact.schur_solve(fact.m32 @ b2) if c2 else np.zeros((n, 0), dtype=complex)
    z33 = fact.schur_solve(b3) if c3 else np.zeros((n, 0), dtype=complex)
    fact.counter.gemv(n, n, c1 + c2)  # M31 B1, M32 B2
    x = [[b1 - fact.m13 @ z31, -fact.m13 @ z32, -fact.m13 @ z33],
         [-fact.m23 @ z31, b2 - fact.m23 @ z32, -fact.m23 @ z33],
         [z31, z32, z33]]
    fact.counter.gemv(n, n, 2 * (c1 + c2 + c3))
    return x


def mixed_theory_units(n):
    return (14.0 / 3.0) * n**3


def ordinary_theory_units(n):
    return (16.0 / 3.0) * n**3


@dataclass
class OrdinaryFactorization:
    """Generic dense LU of the assembled 2N ordinary matrix."""

    lu: tuple
    n: int
    min_pivot: float
    max_pivot: float
    omega: complex = None
    counter: FlopCounter = field(default_factory=FlopCounter)

    def solve(self, rhs):
        rhs = np.asarray(rhs, dtype=complex)
        nrhs = 1 if rhs.ndim == 1 else rhs.shape[1]
        self.counter.lu_solve(2 * self.n, nrhs)
        sol = sla.lu_solve(self.lu, rhs, check_finite=False)
        return sol[:self.n], sol[self.n:]


def factor_ordinary(system: OrdinarySystem, counter=None) -> OrdinaryFactorization:
    counter = counter if counter is not None else FlopCounter()
    a = system.full_matrix()
    lu, dmin, dmax = _lu_with_pivot_check(a, complex(system.params.omega), counter)
    return OrdinaryFactorization(lu=lu, n=system.n, min_pivot=dmin, max_pivot=dmax,
                                 omega=complex(system.params.omega), counter=counter)


def solve_ordinary_dense(system: OrdinarySystem, rhs=None, counter=None):
    """LU-solve the 2N system; rhs defaults to the built-in (rhs1, 0)."""
    fact = factor_ordinary(system, counter=counter)
    if rhs is None:
        rhs = system.full_rhs()
    return fact.solve(rhs)
