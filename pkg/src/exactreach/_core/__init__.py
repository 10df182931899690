"""Hot kernels for value iteration.

The Cython extension is used when it was built; otherwise the numpy
fallback is imported.  Set ``EXACTREACH_PURE_PYTHON=1`` to force the
fallback.
"""

import importlib
import os

__all__ = ["BACKEND", "backups", "sweep", "load_backend", "available_backends"]


def load_backend(name):
    """Return the kernel module for ``"cython"`` or ``"numpy"``."""
    module = {"cython": "._vi_kernel", "numpy": "._vi_numpy"}[name]
    return importlib.import_module(module, __name__)


def available_backends():
    names = []
    for name in ("cython", "numpy"):
        try:
            load_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


if os.environ.get("EXACTREACH_PURE_PYTHON"):
    _impl = load_backend("numpy")
    BACKEND = "numpy"
else:
    try:
        _impl = load_backend("cython")
        BACKEND = "cython"
    except ImportError:
        _impl = load_backend("numpy")
        BACKEND = "numpy"

backups = _impl.backups
sweep = _impl.sweep
