"""Kernel backend selection.

The compiled core is used when it imports; otherwise the numpy fallback.
Set ``CLIFFTOMO_KERNELS=python`` to force the fallback. Callers must look
kernels up through this module at call time (``_kernels.rows_h(...)``) so
that :func:`use_backend` can swap implementations.
"""

import contextlib
import os

from . import _pykernels
from ._pykernels import OP_CNOT, OP_H, OP_S, OP_X, OP_Z

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

KERNEL_NAMES = (
    "mat_mul",
    "row_reduce_signed",
    "pauli_mul_phase",
    "rows_h",
    "rows_s",
    "rows_cnot",
    "rows_x",
    "rows_z",
    "rows_conjugate",
    "rows_program",
)

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels


def available_backends():
    return tuple(_BACKENDS)


def backend_module(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {available_backends()}") from None


def _install(module):
    g = globals()
    for fn in KERNEL_NAMES:
        g[fn] = getattr(module, fn)
    g["BACKEND"] = module.NAME


def set_backend(name):
    _install(backend_module(name))


@contextlib.contextmanager
def use_backend(name):
    previous = BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


_requested = os.environ.get("CLIFFTOMO_KERNELS", "auto")
if _requested == "auto":
    _install(_ckernels if _ckernels is not None else _pykernels)
else:
    set_backend(_requested)
