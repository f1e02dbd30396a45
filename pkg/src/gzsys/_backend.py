"""Select the kernel implementation at import time.

Set ``GZSYS_BACKEND=python`` to force the pure-Python kernels, or
``GZSYS_BACKEND=compiled`` to fail loudly when the extension is missing.
"""

import os

from . import _kernels_py

_choice = os.environ.get("GZSYS_BACKEND", "auto").lower()

if _choice == "python":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        kernels = _kernels_py
        BACKEND = "python"

horner = kernels.horner
aberth = kernels.aberth
hessenberg_charpolys = kernels.hessenberg_charpolys
hessenberg_from_charpolys = kernels.hessenberg_from_charpolys

__all__ = [
    "BACKEND",
    "aberth",
    "hessenberg_charpolys",
    "hessenberg_from_charpolys",
    "horner",
]
