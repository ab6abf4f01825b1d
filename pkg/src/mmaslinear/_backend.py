"""Kernel backend selection.

The compiled kernels are used when the extension imports; otherwise, or when
``MMASLINEAR_PURE_PYTHON`` is set to a non-empty value, the numpy kernels are
used. Both consume the random stream identically, so results do not depend on
which one is active.
"""

import importlib
import os

_MODULES = {"cython": "mmaslinear._ckernels", "python": "mmaslinear._pykernels"}


def load(name):
    """Import a backend by name (``"cython"`` or ``"python"``)."""
    if name not in _MODULES:
        raise ValueError(f"unknown backend {name!r}; expected one of {', '.join(_MODULES)}")
    return importlib.import_module(_MODULES[name])


def _select():
    if not os.environ.get("MMASLINEAR_PURE_PYTHON"):
        try:
            return "cython", load("cython")
        except ImportError:
            pass
    return "python", load("python")


NAME, kernels = _select()
