"""Kernel backend selection.

The package ships two interchangeable implementations of its dense hot-path
kernels: a Cython extension (``_fast``) and a NumPy reference (``pure``).
The compiled one is used when importable; setting the environment variable
``Q2SYNTH_PURE`` to any non-empty value forces the NumPy path.
"""

import os

from . import pure

if os.environ.get("Q2SYNTH_PURE", ""):
    backend = pure
    BACKEND_NAME = "pure"
else:
    try:
        from . import _fast as backend  # type: ignore[no-redef]

        BACKEND_NAME = "compiled"
    except ImportError:
        backend = pure
        BACKEND_NAME = "pure"

jacobi_real_sym = backend.jacobi_real_sym
charpoly4 = backend.charpoly4
gamma4 = backend.gamma4

__all__ = ["backend", "BACKEND_NAME", "jacobi_real_sym", "charpoly4", "gamma4", "pure"]
