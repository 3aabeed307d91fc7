"""Kernel selection.  The compiled extension is used when it imports."""
from . import _pure

try:
    from . import _ext as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _pure}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

kernels = _compiled if _compiled is not None else _pure


def active_backend() -> str:
    return "compiled" if kernels is _compiled and _compiled is not None else "python"


class use_backend:
    """Switch every public module to the ``"python"`` or ``"compiled"`` kernels.

    Takes effect immediately; used as a context manager it restores the
    previous choice on exit.
    """

    def __init__(self, name: str):
        global kernels
        if name not in BACKENDS:
            raise ValueError(
                f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}"
            )
        self._previous = kernels
        kernels = BACKENDS[name]

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        global kernels
        kernels = self._previous
        return False
