"""Kernel backend selection and thread budget.

The hot numeric kernels (batched network evaluation, the Adam training
loop, sinusoid accumulation, the radix-2 FFT) exist twice: as numba
``@njit`` loops in ``_kernels_numba`` and as vectorized numpy in
``_kernels_numpy``.  Which pair is active is decided by the
``SIREN_HARMONICS_BACKEND`` environment variable (``"numba"`` or
``"numpy"``); unset, numba is used when importable and numpy otherwise.
``set_backend`` overrides the choice at runtime (used by the benchmark
and the test suite).

``SIREN_HARMONICS_THREADS`` caps internal parallelism (index-chunked
spectrum assembly); default is the machine's CPU count.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_numpy

BACKEND_ENV = "SIREN_HARMONICS_BACKEND"
THREADS_ENV = "SIREN_HARMONICS_THREADS"

_active: str | None = None
_numba_module: ModuleType | None = None
_numba_failed = False


def _try_import_numba() -> ModuleType | None:
    global _numba_module, _numba_failed
    if _numba_module is None and not _numba_failed:
        try:
            from . import _kernels_numba

            _numba_module = _kernels_numba
        except ImportError:
            _numba_failed = True
    return _numba_module


def available_backends() -> list[str]:
    names = ["numpy"]
    if _try_import_numba() is not None:
        names.append("numba")
    return names


def get_backend() -> str:
    """Name of the active backend, resolving the env var on first use."""
    global _active
    if _active is None:
        requested = os.environ.get(BACKEND_ENV, "").strip().lower()
        if requested:
            set_backend(requested)
        else:
            _active = "numba" if _try_import_numba() is not None else "numpy"
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in ("numpy", "numba"):
        raise ValueError(f"unknown backend {name!r}; expected 'numpy' or 'numba'")
    if name == "numba" and _try_import_numba() is None:
        raise ValueError("backend 'numba' requested but numba is not importable")
    _active = name


def kernels() -> ModuleType:
    """The module providing the active kernel implementations."""
    if get_backend() == "numba":
        mod = _try_import_numba()
        assert mod is not None
        return mod
    return _kernels_numpy


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1
