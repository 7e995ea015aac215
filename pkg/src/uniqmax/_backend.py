"""Kernel backend selection.

The compiled extension is preferred when importable; set
UNIQMAX_FORCE_PURE=1 to force the pure numpy/Python kernels (used by the
backend-equivalence tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _purekernels

if os.environ.get("UNIQMAX_FORCE_PURE") == "1":
    _impl = _purekernels
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _purekernels

census_pass = _impl.census_pass
mc_tally = _impl.mc_tally


def backend_name() -> str:
    return _impl.name


def available_backends() -> dict[str, object]:
    """Importable kernel modules by name (for benchmarks and tests)."""
    backends: dict[str, object] = {"pure": _purekernels}
    try:
        from . import _kernels
        backends["compiled"] = _kernels
    except ImportError:
        pass
    return backends
