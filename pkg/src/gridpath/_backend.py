"""Pick the kernel implementation at import time.

The compiled extension is preferred; setting ``GRIDPATH_PURE=1`` forces the
pure-Python kernels, which are also used when the extension was not built.
"""
import importlib
import os

from . import _pykernels


def _load_compiled():
    try:
        return importlib.import_module("gridpath._ckernels")
    except ImportError:
        return None


_compiled = _load_compiled()

if os.environ.get("GRIDPATH_PURE", "") not in ("", "0") or _compiled is None:
    kernels = _pykernels
else:
    kernels = _compiled

BACKEND = kernels.BACKEND


def available() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get_kernels(name: str | None = None):
    """Kernel module by name (``"cython"`` or ``"python"``); default is the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
