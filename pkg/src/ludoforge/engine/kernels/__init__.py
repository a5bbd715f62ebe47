"""Kernel dispatch: numba-compiled scalar loops or the numpy fallback.

Selection, once at import time:

* ``LUDOFORGE_JIT=0``  -> numpy fallback (``_vector``)
* anything else        -> ``_scalar`` compiled with ``@njit`` when numba
                          imports cleanly, numpy fallback otherwise.

``JIT_ENABLED`` records what was picked; ``benchmarks/bench_kernels.py``
times the two paths against each other.
"""

from __future__ import annotations

import os

from . import _vector

_KERNEL_NAMES = (
    "max_run_through",
    "line_anywhere",
    "enclosed_captures",
    "label_components",
    "hop_candidates",
    "step_candidates",
    "slide_candidates",
    "component_region_bits",
)

JIT_ENABLED = False

if os.environ.get("LUDOFORGE_JIT", "1") != "0":
    try:
        from numba import njit

        from . import _scalar

        for _name in _KERNEL_NAMES:
            globals()[_name] = njit(cache=True, nogil=True)(getattr(_scalar, _name))
        JIT_ENABLED = True
    except ImportError:
        pass

if not JIT_ENABLED:
    for _name in _KERNEL_NAMES:
        globals()[_name] = getattr(_vector, _name)

__all__ = list(_KERNEL_NAMES) + ["JIT_ENABLED"]
