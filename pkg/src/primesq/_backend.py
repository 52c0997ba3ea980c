"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
``PRIMESQ_BACKEND=python`` forces the fallback, ``PRIMESQ_BACKEND=cython``
makes a missing extension an import error.
"""

import os

from . import _pykernels

_requested = os.environ.get("PRIMESQ_BACKEND", "auto").lower()

if _requested == "python":
    kernels = _pykernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        if _requested == "cython":
            raise
        kernels = _pykernels

BACKEND = kernels.BACKEND


def get_kernels(name=None):
    """Return the kernel module by name ("cython" or "python"), default active."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
