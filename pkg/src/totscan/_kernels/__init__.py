"""Kernel backend selection.

The hot loops (segment sieving, totient tables, per-prime scan reductions)
have two interchangeable implementations:

* ``_core`` — a compiled Cython extension,
* ``_fallback`` — pure NumPy, used automatically when the extension is not
  built.

Both honour the same contracts and certify their own floating-point error
bounds; exact integer outputs (primes, totients) are identical.  Select
explicitly with the ``TOTSCAN_BACKEND`` environment variable (``cython`` /
``fallback`` / ``auto``) or :func:`set_backend`.
"""

import os

from . import _fallback

_active = _fallback
_requested = os.environ.get("TOTSCAN_BACKEND", "auto").lower()

if _requested in ("auto", "cython"):
    try:
        from . import _core

        _active = _core
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "TOTSCAN_BACKEND=cython but the compiled extension is not "
                "available; build it with `pip install -e .`"
            )
elif _requested != "fallback":
    raise ValueError(f"unknown TOTSCAN_BACKEND {_requested!r}")


def available_backends() -> list[str]:
    names = ["fallback"]
    try:
        from . import _core  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def set_backend(name: str):
    """Switch the active backend; returns the backend module."""
    global _active
    if name == "fallback":
        _active = _fallback
    elif name == "cython":
        from . import _core

        _active = _core
    else:
        raise ValueError(f"unknown backend {name!r}")
    return _active


def active():
    return _active


def active_name() -> str:
    return "cython" if _active.__name__.endswith("_core") else "fallback"
