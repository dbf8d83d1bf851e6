"""Select the search kernel at import time.

The compiled kernel is used when the extension is built, unless the
environment variable ``UNCERTAIN_CONFORMANCE_PURE`` is set to a non-empty
value other than ``0``.
"""
import os

from . import _search_py

try:
    from . import _search_c
except ImportError:  # extension not built
    _search_c = None

KERNELS = {"python": _search_py.search}
if _search_c is not None:
    KERNELS["cython"] = _search_c.search

_force_pure = os.environ.get("UNCERTAIN_CONFORMANCE_PURE", "") not in ("", "0")
DEFAULT = "cython" if ("cython" in KERNELS and not _force_pure) else "python"

FOUND = _search_py.FOUND
UNREACHABLE = _search_py.UNREACHABLE
CAP_EXCEEDED = _search_py.CAP_EXCEEDED


def get(name=None):
    """Kernel function by name; ``None`` gives the import-time default."""
    name = name or DEFAULT
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable kernel {name!r}; have {sorted(KERNELS)}") from None
