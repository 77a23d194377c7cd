"""Build script; compiles the optional SU(2) stepping kernel.

The package is fully functional without the extension (a vectorized
numpy fallback is selected at import time), so any failure to build
it is non-fatal.
"""
from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "adia_tradeoff._kernel._native",
                ["src/adia_tradeoff/_kernel/_native.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"adia-tradeoff: skipping native kernel build ({exc!r})")

setup(ext_modules=ext_modules)
