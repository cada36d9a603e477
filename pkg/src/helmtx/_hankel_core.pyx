# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for order-0/1 Bessel and Hankel function arrays.

Same algorithms as helmtx._hankel_fallback (Chebyshev tables on the real
axis, ascending series / large-argument expansions off it), as tight
scalar loops that release the GIL.
"""

import numpy as np

cimport numpy as cnp

from . import _bessel_tables as _tab

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double complex csqrt(double complex)
    double cabs(double complex)

from libc.math cimport cos, fabs, log, sin, sqrt

cdef double EULER = 0.5772156649015328606
cdef double SQRT_HALF = 0.7071067811865475244
cdef double TWO_OVER_PI = 0.6366197723675813431
cdef double PI = 3.141592653589793238462643

cdef double[64] _J0S, _J1S, _Y0S, _Y1S, _P0L, _Q0L, _P1L, _Q1L
cdef int N_J0S, N_J1S, N_Y0S, N_Y1S, N_P0L, N_Q0L, N_P1L, N_Q1L

cdef int _fill(double* dst, src) except -1:
    cdef int i, n = len(src)
    if n > 64:
        raise ValueError("table too long")
    for i in range(n):
        dst[i] = src[i]
    return n

N_J0S = _fill(_J0S, _tab.J0_SMALL)
N_J1S = _fill(_J1S, _tab.J1_SMALL)
N_Y0S = _fill(_Y0S, _tab.Y0_SMALL)
N_Y1S = _fill(_Y1S, _tab.Y1_SMALL)
N_P0L = _fill(_P0L, _tab.P0_LARGE)
N_Q0L = _fill(_Q0L, _tab.Q0_LARGE)
N_P1L = _fill(_P1L, _tab.P1_LARGE)
N_Q1L = _fill(_Q1L, _tab.Q1_LARGE)


cdef inline double _clenshaw(const double* c, int n, double x) nogil:
    cdef double b1 = 0.0, b2 = 0.0, tmp
    cdef double x2 = 2.0 * x
    cdef int k
    for k in range(n - 1, -1, -1):
        tmp = b1
        b1 = x2 * b1 - b2 + c[k]
        b2 = tmp
    return b1 - x * b2


cdef inline void _real_one(double z, double* j0, double* j1, double* y0, double* y1) nogil:
    cdef double v, x, lg, u, p0, q0, p1, q1, s, cz, sz, c4, s4
    if z <= 5.0:
        v = z * z
        x = v / 12.5 - 1.0
        j0[0] = _clenshaw(_J0S, N_J0S, x)
        j1[0] = _clenshaw(_J1S, N_J1S, x) * z
        if z > 0.0:
            lg = log(0.5 * z)
            y0[0] = _clenshaw(_Y0S, N_Y0S, x) + TWO_OVER_PI * lg * j0[0]
            y1[0] = _clenshaw(_Y1S, N_Y1S, x) * z + TWO_OVER_PI * (lg * j1[0] - 1.0 / z)
        else:
            y0[0] = -1.0e308
            y1[0] = -1.0e308
    else:
        u = 25.0 / (z * z)
        x = 2.0 * u - 1.0
        p0 = _clenshaw(_P0L, N_P0L, x)
        q0 = _clenshaw(_Q0L, N_Q0L, x) / z
        p1 = _clenshaw(_P1L, N_P1L, x)
        q1 = _clenshaw(_Q1L, N_Q1L, x) / z
        s = sqrt(TWO_OVER_PI / z)
        cz = cos(z)
        sz = sin(z)
        c4 = (cz + sz) * SQRT_HALF
        s4 = (sz - cz) * SQRT_HALF
        j0[0] = s * (p0 * c4 - q0 * s4)
        y0[0] = s * (p0 * s4 + q0 * c4)
        j1[0] = s * (p1 * s4 + q1 * c4)
        y1[0] = s * (-p1 * c4 + q1 * s4)


cdef inline void _series_one(double complex z, double complex* j0, double complex* j1,
                             double complex* y0, double complex* y1) nogil:
    cdef double complex q = 0.25 * z * z
    cdef double complex t0 = 1.0, t1 = 1.0
    cdef double complex sj0 = 1.0, sy0 = 0.0, sj1 = 1.0, sy1 = 1.0
    cdef double hm = 0.0
    # term count for a <1e-17 tail grows roughly linearly in |z|
    cdef double az = cabs(z)
    cdef int niter = 14 + <int> (2.4 * az)
    if niter > 52:
        niter = 52
    cdef int m
    for m in range(1, niter + 1):
        t0 = t0 * (-q) / (<double> (m) * m)
        hm += 1.0 / m
        sj0 += t0
        sy0 += t0 * hm
        t1 = t1 * (-q) / (<double> (m) * (m + 1))
        sj1 += t1
        sy1 += t1 * (hm + hm + 1.0 / (m + 1))
    j0[0] = sj0
    j1[0] = 0.5 * z * sj1
    cdef double complex lg = clog(0.5 * z) + EULER
    y0[0] = TWO_OVER_PI * (lg * sj0 - sy0)
    y1[0] = TWO_OVER_PI * (lg * j1[0] - 1.0 / z) - (0.5 * z / PI) * sy1


cdef inline double complex _asym_one(double complex z, int n, int kind) nogil:
    cdef double sgn = 1.0 if kind == 1 else -1.0
    cdef double complex chi = z - (0.5 * n + 0.25) * PI
    cdef double complex pref = csqrt(TWO_OVER_PI / z) * cexp(sgn * 1j * chi)
    cdef double complex total = 1.0, term = 1.0
    cdef double last = 1.0e308, mag
    cdef double fourn2 = 4.0 * n * n
    cdef int m
    for m in range(1, 41):
        term = term * (sgn * 1j) * (fourn2 - (2.0 * m - 1.0) ** 2) / (8.0 * m * z)
        mag = fabs(term.real) + fabs(term.imag)
        if mag >= last:
            break
        total = total + term
        last = mag
        if mag < 1e-18:
            break
    return pref * total


cdef inline void _asym_bessel_one(double complex z, double complex* j0, double complex* j1,
                                  double complex* y0, double complex* y1) nogil:
    cdef bint left = z.real < 0.0
    cdef double complex w = -z if left else z
    cdef double complex h10 = _asym_one(w, 0, 1)
    cdef double complex h20 = _asym_one(w, 0, 2)
    cdef double complex h11 = _asym_one(w, 1, 1)
    cdef double complex h21 = _asym_one(w, 1, 2)
    j0[0] = 0.5 * (h10 + h20)
    j1[0] = 0.5 * (h11 + h21)
    y0[0] = -0.5j * (h10 - h20)
    y1[0] = -0.5j * (h11 - h21)
    cdef double complex s
    if left:
        s = 2.0j if z.imag >= 0.0 else -2.0j
        y0[0] = y0[0] + s * j0[0]
        y1[0] = -(y1[0] + s * j1[0])
        j1[0] = -j1[0]


cdef inline void _cplx_one(double complex z, double complex* j0, double complex* j1,
                           double complex* y0, double complex* y1) nogil:
    cdef double az = cabs(z)
    if az <= 12.0 and (fabs(z.imag) <= 6.0 or az < 9.0):
        _series_one(z, j0, j1, y0, y1)
    else:
        _asym_bessel_one(z, j0, j1, y0, y1)


cdef inline void _j01_one(double complex z, double complex* j0, double complex* j1) nogil:
    cdef double az = cabs(z)
    cdef double complex q, t0, t1, sj0, sj1, y0, y1
    cdef int niter, m
    if az <= 12.0 and (fabs(z.imag) <= 6.0 or az < 9.0):
        q = 0.25 * z * z
        t0 = 1.0
        t1 = 1.0
        sj0 = 1.0
        sj1 = 1.0
        niter = 14 + <int> (2.4 * az)
        if niter > 52:
            niter = 52
        for m in range(1, niter + 1):
            t0 = t0 * (-q) / (<double> (m) * m)
            sj0 += t0
            t1 = t1 * (-q) / (<double> (m) * (m + 1))
            sj1 += t1
        j0[0] = sj0
        j1[0] = 0.5 * z * sj1
    else:
        _asym_bessel_one(z, j0, j1, &y0, &y1)


def bessel01_real(double[::1] z):
    cdef Py_ssize_t n = z.shape[0], i
    j0a = np.empty(n)
    j1a = np.empty(n)
    y0a = np.empty(n)
    y1a = np.empty(n)
    cdef double[::1] j0 = j0a, j1 = j1a, y0 = y0a, y1 = y1a
    with nogil:
        for i in range(n):
            _real_one(z[i], &j0[i], &j1[i], &y0[i], &y1[i])
    return j0a, j1a, y0a, y1a


def hankel01_real(double[::1] z):
    cdef Py_ssize_t n = z.shape[0], i
    h0a = np.empty(n, dtype=np.complex128)
    h1a = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] h0 = h0a, h1 = h1a
    cdef double j0, j1, y0, y1
    with nogil:
        for i in range(n):
            _real_one(z[i], &j0, &j1, &y0, &y1)
            h0[i] = j0 + 1j * y0
            h1[i] = j1 + 1j * y1
    return h0a, h1a


def hankel01_cplx(double complex[::1] z):
    cdef Py_ssize_t n = z.shape[0], i
    h0a = np.empty(n, dtype=np.complex128)
    h1a = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] h0 = h0a, h1 = h1a
    cdef double complex j0, j1, y0, y1
    with nogil:
        for i in range(n):
            _cplx_one(z[i], &j0, &j1, &y0, &y1)
            h0[i] = j0 + 1j * y0
            h1[i] = j1 + 1j * y1
    return h0a, h1a


def bessel01_cplx(double complex[::1] z):
    cdef Py_ssize_t n = z.shape[0], i
    j0a = np.empty(n, dtype=np.complex128)
    j1a = np.empty(n, dtype=np.complex128)
    y0a = np.empty(n, dtype=np.complex128)
    y1a = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] j0 = j0a, j1 = j1a, y0 = y0a, y1 = y1a
    with nogil:
        for i in range(n):
            _cplx_one(z[i], &j0[i], &j1[i], &y0[i], &y1[i])
    return j0a, j1a, y0a, y1a


def besselj01_cplx(double complex[::1] z):
    cdef Py_ssize_t n = z.shape[0], i
    j0a = np.empty(n, dtype=np.complex128)
    j1a = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] j0 = j0a, j1 = j1a
    with nogil:
        for i in range(n):
            _j01_one(z[i], &j0[i], &j1[i])
    return j0a, j1a
