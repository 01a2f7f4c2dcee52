"""Kernel compilation switch.

Kernels are written once as plain loops over integer numpy arrays.  When
numba is importable and ``PQA_NUMBA`` is not set to ``0`` they are compiled
with ``njit``; otherwise the same function body runs in the interpreter.
The interpreted body is always reachable as ``kernel.py_func``, which is
what the object-dtype (arbitrary precision) path uses.
"""
import os
import types

_FLAG = os.environ.get("PQA_NUMBA", "1").strip().lower()
ENABLED = _FLAG not in ("0", "false", "no", "off")

try:
    if not ENABLED:
        raise ImportError
    import numba
except ImportError:  # pragma: no cover - exercised with PQA_NUMBA=0
    numba = None
    ENABLED = False


def kernel(func):
    if numba is not None:
        return numba.njit(cache=True, nogil=True)(func)
    func.py_func = func
    return func


def backend():
    return "numba" if ENABLED else "python"


def interpreted(namespace, names):
    """Plain-Python copies of the named kernels that call each other uncompiled.

    ``py_func`` alone is not enough: a kernel body that calls another kernel
    would still reach the compiled dispatcher, which rejects object arrays.
    """
    g = dict(namespace)
    for n in names:
        f = getattr(namespace[n], "py_func", namespace[n])
        g[n] = types.FunctionType(f.__code__, g, n, f.__defaults__, f.__closure__)
    return types.SimpleNamespace(**{n: g[n] for n in names})
