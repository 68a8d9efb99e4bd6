"""Build script: compiles the optional Cython window-moments kernel.

The package works without the extension (a NumPy/SciPy fallback is selected
at import time), so a failed compile only costs speed, not functionality.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/holoqa/_kernels/_window.pyx"],
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # noqa: BLE001 - extension is optional
    print(f"warning: skipping compiled kernels ({exc})", file=sys.stderr)
    include_dirs = []

setup(
    ext_modules=ext_modules,
    include_dirs=include_dirs,
)
