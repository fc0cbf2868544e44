"""Kernel backend selection.

The hot kernels (lattice enumeration for theta coefficients, point
counting for a_p, the multiplicative a_n fill) exist twice: a compiled
Cython extension and a pure numpy/Python twin with the same signatures.
The compiled one is preferred when importable; SHASCAN_BACKEND=py|c
forces the choice.  `benchmarks/bench_backends.py` compares the two.
"""

import os

from . import _core_py

_forced = os.environ.get("SHASCAN_BACKEND", "").lower()

if _forced == "py":
    kernels = _core_py
    HAVE_EXT = False
else:
    try:
        from . import _core as _ext

        kernels = _ext
        HAVE_EXT = True
    except ImportError:
        if _forced == "c":
            raise ImportError(
                "SHASCAN_BACKEND=c requested but the compiled extension "
                "is not available; reinstall with a working C toolchain"
            )
        kernels = _core_py
        HAVE_EXT = False


def backend_name() -> str:
    return "c" if kernels is not _core_py else "py"
