"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the NumPy
kernels take over.  ``use("python")`` forces the fallback (tests and the
benchmark exercise both).
"""
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def available():
    return sorted(_BACKENDS)


def use(name):
    """Select the active kernel backend by name; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available()}")
    previous = _active.NAME
    _active = _BACKENDS[name]
    return previous


def kernels():
    return _active


def name():
    return _active.NAME
