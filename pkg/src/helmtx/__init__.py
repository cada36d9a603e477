"""helmtx: direct and fast direct solvers for 2D Helmholtz transmission problems.

Boundary integral formulation with mixed direct-indirect unknowns (u, q, phi)
and a Burton-Miller coupling, discretized by a locally corrected trapezoidal
Nystrom method on smooth closed curves.  Includes a structured block-LU
solver, a proxy-skeletonization fast direct solver, a Mie-series reference
for circles, and a contour-integral nonlinear eigensolver.
"""

from .backend import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
