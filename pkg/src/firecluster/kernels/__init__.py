"""Kernel backend selection.

The compiled Cython extension is preferred when available; otherwise the
pure NumPy implementation is used. ``FIRECLUSTER_BACKEND`` forces the
choice (``compiled``/``c`` or ``python``/``pure``). Both backends expose
the same four functions and produce the same results.
"""

from __future__ import annotations

import os

from firecluster.errors import ConfigError

from . import pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None


def _select(name: str):
    name = name.strip().lower()
    if name in ("", "auto"):
        return _ckernels if _ckernels is not None else pykernels
    if name in ("c", "compiled", "ext", "cython"):
        if _ckernels is None:
            raise ConfigError(
                "FIRECLUSTER_BACKEND requested the compiled backend but the "
                "extension is not built; reinstall with a C compiler available"
            )
        return _ckernels
    if name in ("py", "python", "pure", "numpy"):
        return pykernels
    raise ConfigError(f"unknown kernel backend {name!r}")


_impl = _select(os.environ.get("FIRECLUSTER_BACKEND", "auto"))

BACKEND = _impl.BACKEND_NAME

geodesic_pairs = _impl.geodesic_pairs
geodesic_one_to_many = _impl.geodesic_one_to_many
connected_components = _impl.connected_components
nearest_labeled = _impl.nearest_labeled


def use(name: str) -> str:
    """Rebind the public kernel functions to the named backend.

    Intended for benchmarks and tests; returns the active backend name.
    """
    global _impl, BACKEND
    global geodesic_pairs, geodesic_one_to_many, connected_components, nearest_labeled
    _impl = _select(name)
    BACKEND = _impl.BACKEND_NAME
    geodesic_pairs = _impl.geodesic_pairs
    geodesic_one_to_many = _impl.geodesic_one_to_many
    connected_components = _impl.connected_components
    nearest_labeled = _impl.nearest_labeled
    return BACKEND


def available_backends() -> list[str]:
    names = ["python"]
    if _ckernels is not None:
        names.insert(0, "compiled")
    return names
