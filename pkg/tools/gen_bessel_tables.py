#!/usr/bin/env python3
"""Regenerate src/helmtx/_bessel_tables.py from high-precision references.

Chebyshev coefficient tables for J0, J1, Y0, Y1 on the real axis:

* small |z|: fits in v = z**2 on [0, 25] of the entire parts
  (log/pole terms of Y0, Y1 split off analytically),
* large |z|: fits of the modulus functions P_n(u), z*Q_n(u) in
  u = (5/z)**2 on [0, 1], used in the phase-amplitude form.

Run from the repository root:  python tools/gen_bessel_tables.py
"""

import pathlib

import mpmath as mp
import numpy as np
from numpy.polynomial import chebyshev as C

mp.mp.dps = 40

SMALL_DEG = 34
LARGE_DEG = 30
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "helmtx" / "_bessel_tables.py"


def cheb_fit(f, lo, hi, deg, drop=3e-17):
    kk = np.arange(deg + 1)
    xn = np.cos(np.pi * (kk + 0.5) / (deg + 1))
    xs = 0.5 * (hi + lo) + 0.5 * (hi - lo) * xn
    ys = np.array([float(f(x)) for x in xs])
    c = C.chebfit(xn, ys, deg)
    keep = len(c)
    while keep > 1 and abs(c[keep - 1]) < drop:
        keep -= 1
    return c[:keep]


def j0_small(v):
    return mp.besselj(0, mp.sqrt(v))


def j1_small(v):
    if v == 0:
        return mp.mpf(1) / 2
    z = mp.sqrt(v)
    return mp.besselj(1, z) / z


def y0_small(v):
    if v == 0:
        return 2 * mp.euler / mp.pi
    z = mp.sqrt(v)
    return mp.bessely(0, z) - (2 / mp.pi) * mp.log(z / 2) * mp.besselj(0, z)


def y1_small(v):
    if v == 0:
        return mp.mpf(-1) / (2 * mp.pi)
    z = mp.sqrt(v)
    return (mp.bessely(1, z) - (2 / mp.pi) * mp.log(z / 2) * mp.besselj(1, z)
            + 2 / (mp.pi * z)) / z


def modulus(n, piece):
    def f(u):
        if u <= 0:
            u = mp.mpf("1e-24")
        z = 5 / mp.sqrt(u)
        om = z - (mp.mpf(1) / 4 + mp.mpf(n) / 2) * mp.pi
        J, Y = mp.besselj(n, z), mp.bessely(n, z)
        s = mp.sqrt(mp.pi * z / 2)
        P = s * (J * mp.cos(om) + Y * mp.sin(om))
        Q = s * (Y * mp.cos(om) - J * mp.sin(om)) * z
        return (P, Q)[piece]

    return f


def emit(name, coeffs, out):
    out.append(f"{name} = [")
    for c in coeffs:
        out.append(f"    {float(c)!r},")
    out.append("]")
    out.append("")


def main():
    out = [
        '"""Chebyshev tables for real-argument Bessel functions.',
        "",
        "Generated by tools/gen_bessel_tables.py; do not edit by hand.",
        '"""',
        "",
    ]
    emit("J0_SMALL", cheb_fit(j0_small, 0.0, 25.0, SMALL_DEG), out)
    emit("J1_SMALL", cheb_fit(j1_small, 0.0, 25.0, SMALL_DEG), out)
    emit("Y0_SMALL", cheb_fit(y0_small, 0.0, 25.0, SMALL_DEG), out)
    emit("Y1_SMALL", cheb_fit(y1_small, 0.0, 25.0, SMALL_DEG), out)
    emit("P0_LARGE", cheb_fit(modulus(0, 0), 0.0, 1.0, LARGE_DEG), out)
    emit("Q0_LARGE", cheb_fit(modulus(0, 1), 0.0, 1.0, LARGE_DEG), out)
    emit("P1_LARGE", cheb_fit(modulus(1, 0), 0.0, 1.0, LARGE_DEG), out)
    emit("Q1_LARGE", cheb_fit(modulus(1, 1), 0.0, 1.0, LARGE_DEG), out)
    OUT.write_text("\n".join(out))
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
