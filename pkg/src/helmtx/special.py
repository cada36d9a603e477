"""Bessel and Hankel functions of integer order for real and complex arguments.

Self-contained (no external special-function library): order 0/1 come from
the selected backend (`helmtx.backend`), higher orders from Miller-type
downward recurrence for J and stable upward recurrence for Y.  All
functions are stateless and safe for concurrent callers.

Working envelope: ``|z| <= 1e4``, ``|n| <= 200``.  Accuracy is ~1e-12
relative on the real axis and ~1e-10 for complex arguments with
``|Im z| <= 6`` (or ``|z| >= 9``); outside that the routines still return
finite values but with reduced accuracy.
"""

from dataclasses import dataclass

import numpy as np

from . import backend

MAX_ORDER = 200
MAX_ABS_Z = 1.0e4

_OVERFLOW = 1.0e250


class SpecialFunctionDomainError(ValueError):
    """Argument outside the supported domain (z = 0 for Y/H, |z| or order too large)."""


def _check_z(z, allow_zero):
    z = complex(z)
    if abs(z) > MAX_ABS_Z:
        raise SpecialFunctionDomainError(f"|z| = {abs(z):g} exceeds working range {MAX_ABS_Z:g}")
    if not allow_zero and z == 0:
        raise SpecialFunctionDomainError("singular argument z = 0")
    if np.isnan(z.real) or np.isnan(z.imag):
        raise SpecialFunctionDomainError("NaN argument")
    return z


def _check_order(n):
    n = int(n)
    if abs(n) > MAX_ORDER:
        raise SpecialFunctionDomainError(f"order |n| = {abs(n)} exceeds {MAX_ORDER}")
    return n


def _bessel_j_all(nmax, z):
    """J_0..J_nmax: upward recurrence in the oscillatory regime (n < |z|),
    Miller downward recurrence with sum normalization otherwise."""
    if z == 0:
        out = np.zeros(nmax + 1, dtype=complex)
        out[0] = 1.0
        return out
    az = abs(z)
    if nmax <= 0.8 * az:
        # upward is stable while the orders stay below the turning point
        j0, j1, _, _ = backend.bessel01_scalar(z)
        out = np.empty(nmax + 1, dtype=complex)
        out[0] = j0
        if nmax >= 1:
            out[1] = j1
        for m in range(1, nmax):
            out[m + 1] = (2.0 * m / z) * out[m] - out[m - 1]
        return out
    # Miller: start far enough above the turning point that the dominant
    # solution is suppressed (Airy-region width scales like |z|^(1/3))
    start = int(max(nmax, 1.02 * az)) + 30 + 4 * int(az ** (1.0 / 3.0)) \
        + int(2.0 * np.sqrt(nmax + 1))
    fp = 0.0 + 0.0j
    f = 1.0e-30 + 0.0j
    out = np.zeros(nmax + 1, dtype=complex)
    norm = 0.0 + 0.0j
    for m in range(start, -1, -1):
        fm = (2.0 * (m + 1) / z) * f - fp
        fp = f
        f = fm
        if m <= nmax:
            out[m] = f
        if m % 2 == 0:
            norm += f if m == 0 else 2.0 * f
        if abs(f.real) > _OVERFLOW or abs(f.imag) > _OVERFLOW:
            scale = 1.0e-200
            f *= scale
            fp *= scale
            norm *= scale
            out *= scale
    if norm == 0 or not np.isfinite(abs(norm)):
        raise SpecialFunctionDomainError(f"Bessel J recurrence failed at z = {z}")
    return out / norm


def bessel_j(n, z):
    """Bessel function of the first kind J_n(z), integer n, complex z."""
    n = _check_order(n)
    z = _check_z(z, allow_zero=True)
    sign = 1.0
    if n < 0:
        n = -n
        sign = -1.0 if n % 2 else 1.0
    if z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0 + 0.0j
    if n <= 1:
        j0, j1, _, _ = backend.bessel01_scalar(z)
        return sign * (j0 if n == 0 else j1)
    return sign * complex(_bessel_j_all(n, z)[n])


def bessel_y(n, z):
    """Bessel function of the second kind Y_n(z), integer n, complex z != 0."""
    n = _check_order(n)
    z = _check_z(z, allow_zero=False)
    sign = 1.0
    if n < 0:
        n = -n
        sign = -1.0 if n % 2 else 1.0
    _, _, y0, y1 = backend.bessel01_scalar(z)
    if n == 0:
        return sign * y0
    ym, y = y0, y1
    for m in range(1, n):
        ym, y = y, (2.0 * m / z) * y - ym
        if not (np.isfinite(y.real) and np.isfinite(y.imag)):
            raise SpecialFunctionDomainError(f"Y_{m + 1}({z}) overflows")
    return sign * y


@dataclass(frozen=True)
class HankelValue:
    """Value and derivative of H_n^(1) at one argument."""

    order: int
    argument: complex
    value: complex
    derivative: complex


def hankel1(n, z):
    """Hankel function of the first kind with derivative.

    The derivative uses H_n' = H_{n-1} - (n/z) H_n.
    """
    n = _check_order(n)
    z = _check_z(z, allow_zero=False)
    nn = abs(n)
    if nn <= 1:
        j0, j1, y0, y1 = backend.bessel01_scalar(z)
        h0 = j0 + 1j * y0
        h1 = j1 + 1j * y1
        value = h0 if nn == 0 else h1
        below = h1 * (-1.0) if nn == 0 else h0  # H_{-1} = -H_1
        deriv = below - (nn / z) * value
    else:
        js = _bessel_j_all(nn, z)
        _, _, y0, y1 = backend.bessel01_scalar(z)
        ym, y = y0, y1
        for m in range(1, nn):
            ym, y = y, (2.0 * m / z) * y - ym
            if not (np.isfinite(y.real) and np.isfinite(y.imag)):
                raise SpecialFunctionDomainError(f"H_{m + 1}({z}) overflows")
        value = complex(js[nn]) + 1j * y
        below = complex(js[nn - 1]) + 1j * ym
        deriv = below - (nn / z) * value
    if n < 0 and nn % 2:
        value, deriv = -value, -deriv
    return HankelValue(order=n, argument=z, value=value, derivative=deriv)


def bessel_j_derivative(n, z):
    """J_n'(z) via J_n' = J_{n-1} - (n/z) J_n (and -J_1 at n = 0)."""
    n = _check_order(n)
    z = _check_z(z, allow_zero=True)
    if n == 0:
        return -bessel_j(1, z)
    if z == 0:
        return 0.5 if abs(n) == 1 else 0.0
    return bessel_j(n - 1, z) - (n / z) * bessel_j(n, z)


def hankel01_array(z):
    """Array H0^(1), H1^(1); thin re-export of the backend hot path."""
    return backend.hankel01(z)


def besselj01_array(z):
    """Array J0, J1; thin re-export of the backend hot path."""
    return backend.besselj01(z)
