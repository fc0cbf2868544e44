"""shascan: analytic Tate-Shafarevich orders in quadratic twist families.

Ternary theta-series coefficient scans for four fixed curves, truncated
L-series evaluation with certified rounding for arbitrary rank-zero
curves, a two-isogeny Selmer bound, and the twist-statistics pipeline.
"""

from .errors import (
    CapacityError,
    CertificationError,
    OverflowGuardError,
    ShascanError,
    VanishingLError,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CertificationError",
    "OverflowGuardError",
    "ShascanError",
    "VanishingLError",
    "__version__",
]
