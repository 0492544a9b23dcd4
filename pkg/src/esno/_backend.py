"""Pick the reconstruction kernel backend at import.

``ESNO_BACKEND=python`` forces the numpy fallback; ``ESNO_BACKEND=cython``
makes a missing extension an import error instead of a silent fallback.
"""

import importlib
import os

_MODULES = {"cython": "esno._kernels_c", "python": "esno._kernels_py"}


def load_backend(name: str):
    if name not in _MODULES:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_MODULES)}")
    return importlib.import_module(_MODULES[name])


def available_backends() -> list[str]:
    names = []
    for name in _MODULES:
        try:
            load_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _select():
    forced = os.environ.get("ESNO_BACKEND", "").strip().lower()
    if forced:
        return forced, load_backend(forced)
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", load_backend("python")


BACKEND, kernels = _select()
