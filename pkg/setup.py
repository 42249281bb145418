"""Build script: compiles the optional RK4 stepper extension.

If Cython or a C compiler is unavailable the build falls back to a
pure-Python wheel; the package selects the numpy stepper at import time.
"""
from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "opinionnet._stepper",
                ["src/opinionnet/_stepper.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
