"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the
pure-Python twin is the fallback. Set ``GRAVOPT_PURE_PYTHON=1`` to force
the fallback (useful for benchmarking and debugging). Both backends are
bit-identical, so the choice never changes results.
"""

import os

from . import _kernels_py

if os.environ.get("GRAVOPT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_c as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

accumulate_forces = _impl.accumulate_forces
apply_kinematics = _impl.apply_kinematics
