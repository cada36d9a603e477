"""Pure-NumPy kernels for order-0/1 Bessel and Hankel function arrays.

This is the fallback implementation selected when the compiled extension
is unavailable (see :mod:`helmtx.backend`).  Algorithms:

* real arguments: Chebyshev tables (``_bessel_tables``) below z = 5 and a
  phase-amplitude form above, accurate to ~1e-14 relative,
* complex arguments: ascending series for |z| <= 12, large-argument
  Hankel expansions of both kinds beyond, ~1e-10 relative on the
  envelope |Im z| <= 6 (or |z| >= 9).

All functions are stateless and assume nonzero arguments; callers guard
z = 0 (only J0/J1 are finite there).
"""

import numpy as np

from . import _bessel_tables as _tab

EULER = 0.5772156649015328606
SQRT_HALF = 0.7071067811865475244
TWO_OVER_PI = 0.6366197723675813431

_J0S = np.array(_tab.J0_SMALL)
_J1S = np.array(_tab.J1_SMALL)
_Y0S = np.array(_tab.Y0_SMALL)
_Y1S = np.array(_tab.Y1_SMALL)
_P0L = np.array(_tab.P0_LARGE)
_Q0L = np.array(_tab.Q0_LARGE)
_P1L = np.array(_tab.P1_LARGE)
_Q1L = np.array(_tab.Q1_LARGE)

SERIES_TERMS = 52
ASYM_TERMS = 40


def _clenshaw(coef, x):
    """Evaluate a Chebyshev series at x mapped to [-1, 1]."""
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    x2 = 2.0 * x
    for c in coef[::-1]:
        b1, b2 = x2 * b1 - b2 + c, b1
    return b1 - x * b2


def bessel01_real(z):
    """J0, J1, Y0, Y1 for a real array z >= 0 (Y undefined at 0)."""
    z = np.asarray(z, dtype=np.float64)
    j0 = np.empty_like(z)
    j1 = np.empty_like(z)
    y0 = np.empty_like(z)
    y1 = np.empty_like(z)

    small = z <= 5.0
    if np.any(small):
        zs = z[small]
        v = zs * zs
        x = v / 12.5 - 1.0
        j0s = _clenshaw(_J0S, x)
        j1s = _clenshaw(_J1S, x) * zs
        j0[small] = j0s
        j1[small] = j1s
        with np.errstate(divide="ignore", invalid="ignore"):
            lg = np.log(zs / 2.0)
            y0[small] = _clenshaw(_Y0S, x) + TWO_OVER_PI * lg * j0s
            y1[small] = _clenshaw(_Y1S, x) * zs + TWO_OVER_PI * (lg * j1s - 1.0 / zs)

    big = ~small
    if np.any(big):
        zb = z[big]
        u = 25.0 / (zb * zb)
        x = 2.0 * u - 1.0
        p0 = _clenshaw(_P0L, x)
        q0 = _clenshaw(_Q0L, x) / zb
        p1 = _clenshaw(_P1L, x)
        q1 = _clenshaw(_Q1L, x) / zb
        s = np.sqrt(TWO_OVER_PI / zb)
        cz = np.cos(zb)
        sz = np.sin(zb)
        c4 = (cz + sz) * SQRT_HALF   # cos(z - pi/4)
        s4 = (sz - cz) * SQRT_HALF   # sin(z - pi/4)
        j0[big] = s * (p0 * c4 - q0 * s4)
        y0[big] = s * (p0 * s4 + q0 * c4)
        # cos(z - 3pi/4) = s4, sin(z - 3pi/4) = -c4
        j1[big] = s * (p1 * s4 + q1 * c4)
        y1[big] = s * (-p1 * c4 + q1 * s4)
    return j0, j1, y0, y1


def hankel01_real(z):
    """H0^(1), H1^(1) for a real array z > 0."""
    j0, j1, y0, y1 = bessel01_real(z)
    return j0 + 1j * y0, j1 + 1j * y1


def _series_cplx(z):
    """Ascending-series J0, J1, Y0, Y1 for complex z, |z| <= ~12."""
    z = np.asarray(z, dtype=np.complex128)
    q = 0.25 * z * z
    j0 = np.ones_like(z)
    sy0 = np.zeros_like(z)          # sum H_m (-q)^m/(m!)^2, sign folded below
    j1s = np.ones_like(z)           # J1/(z/2)
    sy1 = np.ones_like(z)           # sum (H_m+H_{m+1})(-q)^m/(m!(m+1)!)
    t0 = np.ones_like(z)
    t1 = np.ones_like(z)
    hm = 0.0
    for m in range(1, SERIES_TERMS + 1):
        t0 = t0 * (-q) / (m * m)
        hm += 1.0 / m
        j0 += t0
        sy0 += t0 * hm
        t1 = t1 * (-q) / (m * (m + 1))
        j1s += t1
        sy1 += t1 * (hm + hm + 1.0 / (m + 1))
    j1 = 0.5 * z * j1s
    lg = np.log(0.5 * z) + EULER
    y0 = TWO_OVER_PI * (lg * j0 - sy0)
    y1 = TWO_OVER_PI * (lg * j1 - 1.0 / z) - (0.5 * z / np.pi) * sy1
    return j0, j1, y0, y1


def _asym_hankel(z, n, kind):
    """Large-|z| expansion of H_n^(kind) for complex z, n in {0, 1}."""
    sgn = 1.0 if kind == 1 else -1.0
    chi = z - (0.5 * n + 0.25) * np.pi
    pref = np.sqrt(TWO_OVER_PI / z) * np.exp(sgn * 1j * chi)
    total = np.ones_like(z)
    term = np.ones_like(z)
    last = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    fourn2 = 4.0 * n * n
    for m in range(1, ASYM_TERMS + 1):
        term = term * (sgn * 1j) * (fourn2 - (2 * m - 1) ** 2) / (8.0 * m * z)
        mag = np.abs(term)
        active &= mag < last
        total = np.where(active, total + term, total)
        last = mag
    return pref * total


def _region_series(z):
    az = np.abs(z)
    return (az <= 12.0) & ((np.abs(z.imag) <= 6.0) | (az < 9.0))


def _asym_bessel01(z):
    """J0, J1, Y0, Y1 for large |z|, any arg z (principal branch).

    The one-sided Hankel expansions degrade near the negative real axis,
    so the left half-plane is mapped to w = -z and folded back through
    the exact integer-order circuit relations.
    """
    left = z.real < 0.0
    w = np.where(left, -z, z)
    h1_0 = _asym_hankel(w, 0, 1)
    h2_0 = _asym_hankel(w, 0, 2)
    h1_1 = _asym_hankel(w, 1, 1)
    h2_1 = _asym_hankel(w, 1, 2)
    j0 = 0.5 * (h1_0 + h2_0)
    j1 = 0.5 * (h1_1 + h2_1)
    y0 = -0.5j * (h1_0 - h2_0)
    y1 = -0.5j * (h1_1 - h2_1)
    if np.any(left):
        # z = w*exp(+i pi) for Im z >= 0 (cut continuous from above), else -i pi
        s = np.where(z.imag >= 0.0, 2.0j, -2.0j)
        y0 = np.where(left, y0 + s * j0, y0)
        y1 = np.where(left, -(y1 + s * j1), y1)
        j1 = np.where(left, -j1, j1)
    return j0, j1, y0, y1


def hankel01_cplx(z):
    """H0^(1), H1^(1) for a complex array z != 0."""
    z = np.asarray(z, dtype=np.complex128)
    h0 = np.empty_like(z)
    h1 = np.empty_like(z)
    ser = _region_series(z)
    if np.any(ser):
        j0, j1, y0, y1 = _series_cplx(z[ser])
        h0[ser] = j0 + 1j * y0
        h1[ser] = j1 + 1j * y1
    big = ~ser
    if np.any(big):
        j0, j1, y0, y1 = _asym_bessel01(z[big])
        h0[big] = j0 + 1j * y0
        h1[big] = j1 + 1j * y1
    return h0, h1


def bessel01_cplx(z):
    """J0, J1, Y0, Y1 for a complex array z != 0."""
    z = np.asarray(z, dtype=np.complex128)
    j0 = np.empty_like(z)
    j1 = np.empty_like(z)
    y0 = np.empty_like(z)
    y1 = np.empty_like(z)
    ser = _region_series(z)
    if np.any(ser):
        j0[ser], j1[ser], y0[ser], y1[ser] = _series_cplx(z[ser])
    big = ~ser
    if np.any(big):
        j0[big], j1[big], y0[big], y1[big] = _asym_bessel01(z[big])
    return j0, j1, y0, y1


_LONG_COMPLEX = getattr(np, "complex256", np.complex128)
EULER_HI = np.longdouble("0.57721566490153286060651209008")


def bessel01_scalar_hi(z):
    """Scalar J0, J1, Y0, Y1 with extended-precision series accumulation.

    The ascending series loses ~exp(|z| - |Im z|) digits to cancellation;
    summing in long-double complex keeps scalar order-0/1 values near
    machine precision across the series region (needed by the Wronskian
    tolerance of the scalar API, not by the array hot paths).
    """
    zq = _LONG_COMPLEX(z)
    q = zq * zq / 4
    j0 = _LONG_COMPLEX(1)
    sy0 = _LONG_COMPLEX(0)
    j1s = _LONG_COMPLEX(1)
    sy1 = _LONG_COMPLEX(1)
    t0 = _LONG_COMPLEX(1)
    t1 = _LONG_COMPLEX(1)
    hm = np.longdouble(0)
    for m in range(1, SERIES_TERMS + 9):
        t0 = t0 * (-q) / (m * m)
        hm += np.longdouble(1) / m
        j0 += t0
        sy0 += t0 * hm
        t1 = t1 * (-q) / (m * (m + 1))
        j1s += t1
        sy1 += t1 * (hm + hm + np.longdouble(1) / (m + 1))
    j1 = zq / 2 * j1s
    lg = np.log(zq / 2) + _LONG_COMPLEX(EULER_HI)
    pi_hi = np.longdouble("3.14159265358979323846264338328")
    y0 = (2 / pi_hi) * (lg * j0 - sy0)
    y1 = (2 / pi_hi) * (lg * j1 - 1 / zq) - (zq / (2 * pi_hi)) * sy1
    return complex(j0), complex(j1), complex(y0), complex(y1)


def besselj01_cplx(z):
    """J0, J1 for a complex array z (skips the Y-series work)."""
    z = np.asarray(z, dtype=np.complex128)
    j0 = np.empty_like(z)
    j1 = np.empty_like(z)
    ser = _region_series(z)
    if np.any(ser):
        zs = z[ser]
        q = 0.25 * zs * zs
        sj0 = np.ones_like(zs)
        sj1 = np.ones_like(zs)
        t0 = np.ones_like(zs)
        t1 = np.ones_like(zs)
        for m in range(1, SERIES_TERMS + 1):
            t0 = t0 * (-q) / (m * m)
            sj0 += t0
            t1 = t1 * (-q) / (m * (m + 1))
            sj1 += t1
        j0[ser] = sj0
        j1[ser] = 0.5 * zs * sj1
    big = ~ser
    if np.any(big):
        j0[big], j1[big], _, _ = _asym_bessel01(z[big])
    return j0, j1
