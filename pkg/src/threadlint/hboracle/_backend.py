"""Kernel backend selection: compiled extension when available, pure otherwise.

Set THREADLINT_PURE=1 to force the pure-Python kernels (used by the parity
tests and the benchmark to compare both lanes).
"""

from __future__ import annotations

import os

if os.environ.get("THREADLINT_PURE", "") not in ("", "0"):
    from threadlint.hboracle import _kernel_py as kernel
else:
    try:
        from threadlint.hboracle import _speedups as kernel  # type: ignore[no-redef]
    except ImportError:
        from threadlint.hboracle import _kernel_py as kernel  # type: ignore[no-redef]

BACKEND: str = kernel.BACKEND
