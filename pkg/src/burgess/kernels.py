"""Backend selection for the inner loops.

The compiled extension is used when it imports; otherwise, or when the
environment variable BURGESS_PURE_PYTHON is set to a non-empty value other
than "0", the numpy versions in ``_pykernels`` are used.  ``BACKEND`` names
the active one.
"""

import os

import numpy as np

from . import _pykernels

_want_pure = os.environ.get("BURGESS_PURE_PYTHON", "") not in ("", "0")

try:
    if _want_pure:
        raise ImportError("pure-python backend requested")
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def available_backends() -> dict:
    out = {"python": _pykernels}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def window_maxima(values, nmax: int) -> np.ndarray:
    """max over M of |S(M, n)| for every window length n = 1..nmax."""
    return _impl.window_maxima(np.ascontiguousarray(values, dtype=np.complex128), int(nmax))


def fourth_moment(table, m: int, B: int) -> float:
    return float(_impl.fourth_moment(_i64(table), int(m), int(B)))


def polynomial_sums(table, m: int, shifts) -> np.ndarray:
    return _impl.polynomial_sums(_i64(table), int(m), _i64(shifts).reshape(-1, 4))


def v_counts(q: int, M: int, N: int, units) -> np.ndarray:
    return _impl.v_counts(int(q), int(M), int(N), _i64(units))
