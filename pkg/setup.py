import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "helmtx._hankel_core",
    ["src/helmtx/_hankel_core.pyx"],
    include_dirs=[numpy.get_include()],
    # -fcx-limited-range: inline complex multiply/divide (no inf/nan
    # recovery path); fine here, arguments are bounded and nonzero.
    extra_compile_args=["-O3", "-fcx-limited-range"],
)

directives = {
    "boundscheck": False,
    "wraparound": False,
    "cdivision": True,
    "initializedcheck": False,
    "language_level": 3,
}

setup(ext_modules=cythonize([ext], compiler_directives=directives))
