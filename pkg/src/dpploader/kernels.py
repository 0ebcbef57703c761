"""Backend selection for the statevector kernels.

The compiled extension is used when it imports; otherwise (or when
``DPPLOADER_PURE_PYTHON=1``) the numpy implementation is used. Both expose
the same functions, and ``BACKEND`` names the active one.
"""
import os

from . import _kernels_py

_FUNCS = (
    "apply_1q",
    "apply_diag1",
    "apply_givens",
    "apply_cnot",
    "apply_sign_mask",
    "apply_crz",
    "hamming_weights",
)


def _load(force_python=None):
    if force_python is None:
        force_python = os.environ.get("DPPLOADER_PURE_PYTHON", "") not in ("", "0")
    if not force_python:
        try:
            from . import _kernels as mod
            return mod, "cython"
        except ImportError:
            pass
    return _kernels_py, "python"


def get_backend(name):
    """Return the kernel module called ``name`` ("cython" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")


_mod, BACKEND = _load()
globals().update({f: getattr(_mod, f) for f in _FUNCS})
