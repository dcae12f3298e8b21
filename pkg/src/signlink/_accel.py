"""Optional numba acceleration.

Hot kernels are written twice: a numba ``@njit`` loop and a vectorised numpy
path.  The numba path is used when numba imports cleanly and the environment
variable ``SIGNLINK_DISABLE_NUMBA`` is unset (or ``0``/``false``).  The flag is
read once at import time.
"""

from __future__ import annotations

import os

_FLAG = "SIGNLINK_DISABLE_NUMBA"


def _flag_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    import numba as _numba  # noqa: F401

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - depends on environment
    _numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _flag_disabled()


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged.

    Independent of ``USE_NUMBA`` so the benchmark can still time the compiled
    kernels when the fallback path is selected.
    """
    if not HAVE_NUMBA:
        return fn
    return _numba.njit(cache=True, nogil=True)(fn)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
