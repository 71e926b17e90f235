"""Kernel dispatch.

The compiled extension is used when it imported cleanly; setting the
environment variable ``PSTCHAIN_PURE_PYTHON=1`` before import forces
the numpy fallback.  Both backends expose ``reduced_density_series``
and ``concurrence_series`` with identical semantics.
"""

from __future__ import annotations

import os

from . import _pure

_BACKENDS = {"pure": _pure}

try:
    from . import _fast  # compiled at install time; optional
    _BACKENDS["compiled"] = _fast
except ImportError:
    _fast = None

if os.environ.get("PSTCHAIN_PURE_PYTHON") == "1" or _fast is None:
    _ACTIVE_NAME = "pure"
else:
    _ACTIVE_NAME = "compiled"

_ACTIVE = _BACKENDS[_ACTIVE_NAME]

reduced_density_series = _ACTIVE.reduced_density_series
concurrence_series = _ACTIVE.concurrence_series


def backend_name() -> str:
    """Name of the backend selected at import time."""
    return _ACTIVE_NAME


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str):
    """Fetch a specific backend module, mainly for tests and benchmarks."""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise KeyError(f"unknown backend {name!r}; have {sorted(_BACKENDS)}") from None
