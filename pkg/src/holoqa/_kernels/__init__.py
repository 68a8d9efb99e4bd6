"""Hot-kernel backend selection.

The compiled Cython extension is used when it built successfully; otherwise
(or when HOLOQA_PURE_PYTHON=1 is set) the NumPy/SciPy fallback is selected.
Both backends implement the same `local_moments` contract and agree to
floating-point roundoff; `benchmarks/bench_kernels.py` compares them.
"""

import os

if os.environ.get("HOLOQA_PURE_PYTHON") == "1":
    from . import pure as _impl
    BACKEND = "pure"
else:
    try:
        from . import _window as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import pure as _impl
        BACKEND = "pure"

local_moments = _impl.local_moments

__all__ = ["local_moments", "BACKEND"]
