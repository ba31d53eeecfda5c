"""Select the kernel backend at import time.

The compiled ``_speedups`` extension is used when it imports; otherwise the
pure-Python reference in ``_pykernels``.  Set ``AMOR_PURE_PYTHON=1`` to force
the fallback.
"""
import os

if os.environ.get("AMOR_PURE_PYTHON", "") not in ("", "0"):
    from amor._pykernels import *  # noqa: F401,F403
    from amor._pykernels import BACKEND
else:
    try:
        from amor._speedups import *  # noqa: F401,F403
        from amor._speedups import BACKEND
    except ImportError:
        from amor._pykernels import *  # noqa: F401,F403
        from amor._pykernels import BACKEND

__all__ = [
    "BACKEND",
    "splitmix64_next",
    "shuffle_indices",
    "sample_visible",
    "sample_frames",
    "enumerate_valid",
    "shuffle_many",
    "position_counts",
]
