"""Build script: compiles the optional Cython kernel core.

The package works without the extension (a pure-Python backend is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/slicemax/kernels/corekernels.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - builder environments vary
    print(f"slicemax: skipping compiled kernels ({exc!r}); pure backend will be used")

setup(ext_modules=ext_modules)
