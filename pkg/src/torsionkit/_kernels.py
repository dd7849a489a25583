"""Kernel backend selection.

The compiled ``_ckernels`` module is used when it was built; otherwise the
pure-Python ``_pykernels`` fallback is loaded.  Setting
``TORSIONKIT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("TORSIONKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend or python_backend

BACKEND = _active.BACKEND
free_reduce = _active.free_reduce
pieces = _active.pieces
coset_enumerate = _active.coset_enumerate


def backends():
    """Available backend modules, fallback first."""
    return [b for b in (python_backend, compiled_backend) if b is not None]
