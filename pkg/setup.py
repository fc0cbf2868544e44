"""Build script: compiles the optional fast kernels.

The package works without the extension (a pure numpy/Python twin is
selected at import time), so a failed compile only costs speed.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext = Extension(
        "shascan._core",
        ["src/shascan/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize([ext], language_level=3)
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write(f"shascan: skipping compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
