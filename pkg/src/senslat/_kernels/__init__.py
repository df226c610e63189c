"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled module is used when it imported cleanly; setting the
environment variable ``SENSLAT_PURE_PYTHON=1`` forces the fallback.
``BACKEND`` names the active one.
"""

import os

from . import _pykernels as pure

compiled = None
if os.environ.get("SENSLAT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_active = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

sensitivity_counts = _active.sensitivity_counts
max_packing = _active.max_packing
minimal_sensitive_blocks = _active.minimal_sensitive_blocks
block_profile = _active.block_profile
sliced_blue = _active.sliced_blue

__all__ = [
    "BACKEND",
    "block_profile",
    "compiled",
    "max_packing",
    "minimal_sensitive_blocks",
    "pure",
    "sensitivity_counts",
    "sliced_blue",
]
