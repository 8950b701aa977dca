"""Selection of the matching kernel backend.

The compiled extension is preferred when importable; the pure-Python
kernel is the fallback and the reference for cross-checking.  Set
``RULETAG_PURE_KERNEL=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _match_py


def load_backend(name: str | None = None):
    """Kernel module for ``name`` ("compiled" | "pure"); default selection when None."""
    if name == "pure":
        return _match_py
    if name == "compiled":
        from . import _match_c

        return _match_c
    if name is not None:
        raise ValueError(f"unknown kernel backend {name!r}")
    if os.environ.get("RULETAG_PURE_KERNEL"):
        return _match_py
    try:
        from . import _match_c

        return _match_c
    except ImportError:
        return _match_py


def available_backends() -> list[str]:
    names = ["pure"]
    try:
        from . import _match_c  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


selected = load_backend()
backend_name: str = selected.BACKEND
