"""Backend selection for the hot evaluation kernels.

The compiled Cython extension is preferred; the pure-numpy module is a
drop-in fallback. Set VARORBIT_PURE=1 to force the fallback (used by the
benchmark and by tests that compare the two backends).
"""
import os

from . import _kernels_py

if os.environ.get("VARORBIT_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def potential_batch(samples, masses, alpha):
    return _impl.potential_batch(samples, masses, alpha)


def potential_grad_batch(samples, masses, alpha):
    return _impl.potential_grad_batch(samples, masses, alpha)
