"""Kernel backend selection: compiled extension or NumPy fallback.

The hot loops of operator assembly are order-0/1 Hankel evaluations over
O(N^2) arguments.  A Cython extension (``helmtx._hankel_core``) provides
them when built; otherwise the pure-NumPy implementation in
``helmtx._hankel_fallback`` is used.  Selection happens once at import.

Set ``HELMTX_BACKEND=fallback`` (or ``compiled``) to force a choice, e.g.
for the backend benchmark in ``benchmarks/bench_backends.py``.
"""

import os

import numpy as np

_requested = os.environ.get("HELMTX_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "fallback"):
    raise ImportError(f"HELMTX_BACKEND must be 'compiled' or 'fallback', got {_requested!r}")

_impl = None
if _requested != "fallback":
    try:
        from . import _hankel_core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = None
        if _requested == "compiled":
            raise

if _impl is None:
    from . import _hankel_fallback as _impl  # type: ignore[no-redef]

BACKEND = "compiled" if _impl.__name__.endswith("_hankel_core") else "fallback"


def _is_real(z):
    return not np.iscomplexobj(z)


def hankel01(z):
    """H0^(1)(z), H1^(1)(z) elementwise for a real or complex array.

    Real input must be positive; complex input nonzero (not checked here,
    the quadrature layer guards coincident points).
    """
    z = np.ascontiguousarray(z)
    shape = z.shape
    flat = z.reshape(-1)
    if _is_real(flat):
        h0, h1 = _impl.hankel01_real(flat.astype(np.float64, copy=False))
    elif np.all(flat.imag == 0.0):
        h0, h1 = _impl.hankel01_real(np.ascontiguousarray(flat.real))
    else:
        h0, h1 = _impl.hankel01_cplx(flat.astype(np.complex128, copy=False))
    return np.asarray(h0).reshape(shape), np.asarray(h1).reshape(shape)


def besselj01(z):
    """J0(z), J1(z) elementwise for a real or complex array."""
    z = np.ascontiguousarray(z)
    shape = z.shape
    flat = z.reshape(-1)
    if _is_real(flat):
        j0, j1, _, _ = _impl.bessel01_real(flat.astype(np.float64, copy=False))
    elif np.all(flat.imag == 0.0):
        j0, j1, _, _ = _impl.bessel01_real(np.ascontiguousarray(flat.real))
        j0 = j0.astype(np.complex128)
        j1 = j1.astype(np.complex128)
    else:
        j0, j1 = _impl.besselj01_cplx(flat.astype(np.complex128, copy=False))
    return np.asarray(j0).reshape(shape), np.asarray(j1).reshape(shape)


def bessel01_scalar(z):
    """J0, J1, Y0, Y1 at a single point, complex-valued.

    Complex arguments in the series region go through the extended-
    precision scalar series: scalar callers (Wronskian-grade accuracy)
    need more headroom against the series cancellation than the array
    paths do.
    """
    from . import _hankel_fallback as _fb

    if isinstance(z, complex) and z.imag != 0.0:
        if abs(z) <= 12.0:
            return _fb.bessel01_scalar_hi(z)
        out = _impl.bessel01_cplx(np.array([z], dtype=np.complex128))
    else:
        out = _impl.bessel01_real(np.array([float(np.real(z))]))
    return tuple(complex(np.asarray(a)[0]) for a in out)
