"""Build script: compiles the optional walker kernel, falls back to pure python.

The compiled extension accelerates the Brownian walker simulation in
polariton_sim.mc; every public API works without it (a numpy reference
implementation is selected at import time), so a failed compile only costs
speed, never correctness.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

import numpy


class optional_build_ext(build_ext):
    """build_ext that degrades to a warning when no compiler is usable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # CompileError, DistutilsPlatformError, ...
            warnings.warn(
                "building the walker extension failed (%s); "
                "falling back to the pure-numpy kernel" % exc
            )

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(
                "building %s failed (%s); falling back to the pure-numpy kernel"
                % (ext.name, exc)
            )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "polariton_sim.mc._walk",
        ["src/polariton_sim/mc/_walk.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
