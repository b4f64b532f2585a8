"""Dense tensor fills for the loop-heavy generators.

Every kernel has two paths: a numba ``@njit`` loop and a vectorised numpy
version.  The numba path is the default when numba imports; set
``FDZX_NO_NUMBA=1`` to force the numpy path (``benchmarks/bench_kernels.py``
compares the two).
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_backend = "numba" if HAVE_NUMBA and not os.environ.get("FDZX_NO_NUMBA") else "numpy"


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Switch between ``"numba"`` and ``"numpy"`` at runtime."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    _backend = name


# -- numpy paths ---------------------------------------------------------------


def _x_spider_numpy(dim: int, n_out: int, n_in: int) -> np.ndarray:
    n = n_out + n_in
    if n == 0:
        return np.ones((), dtype=np.float64)
    idx = np.indices((dim,) * n).reshape(n, -1)
    total = idx[:n_out].sum(axis=0) - idx[n_out:].sum(axis=0)
    return (total % dim == 0).astype(np.float64).reshape((dim,) * n)


def _w_node_numpy(big: int, smalls: np.ndarray) -> np.ndarray:
    # axes: one per small leg (size b_i + 1), then the big leg (size big + 1)
    n = len(smalls)
    shape = tuple(int(b) + 1 for b in smalls)
    out = np.zeros(shape + (big + 1,), dtype=np.float64)
    if n == 0:
        out[0] = 1.0
        return out
    idx = np.indices(shape).reshape(n, -1)
    total = idx.sum(axis=0)
    keep = total <= big
    lf = np.array([math.lgamma(k + 1) for k in range(int(total.max()) + 1)])
    logs = lf[total] - lf[idx].sum(axis=0)
    vals = np.exp(0.5 * logs)
    flat = out.reshape(-1, big + 1)
    cols = np.arange(flat.shape[0])
    flat[cols[keep], total[keep]] = vals[keep]
    return out


# -- numba paths ---------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _x_spider_loop(dim, n_out, n_in):
        n = n_out + n_in
        size = dim**n
        out = np.zeros(size, dtype=np.float64)
        for flat in range(size):
            rem = flat
            s = 0
            # row-major: last axis varies fastest
            for axis in range(n - 1, -1, -1):
                digit = rem % dim
                rem //= dim
                if axis < n_out:
                    s += digit
                else:
                    s -= digit
            if s % dim == 0:
                out[flat] = 1.0
        return out

    @njit(cache=True)
    def _w_node_loop(big, smalls):
        n = smalls.shape[0]
        size = 1
        for i in range(n):
            size *= smalls[i] + 1
        lf = np.zeros(big + 2)
        for k in range(1, big + 2):
            lf[k] = lf[k - 1] + math.log(k)
        out = np.zeros(size * (big + 1), dtype=np.float64)
        for flat in range(size):
            rem = flat
            total = 0
            denom = 0.0
            for axis in range(n - 1, -1, -1):
                d = smalls[axis] + 1
                digit = rem % d
                rem //= d
                total += digit
                if total <= big:
                    denom += lf[digit]
            if total <= big:
                out[flat * (big + 1) + total] = math.exp(0.5 * (lf[total] - denom))
        return out


def x_spider_tensor(dim: int, n_out: int, n_in: int) -> np.ndarray:
    """0/1 tensor with a one wherever outputs and inputs agree modulo ``dim``."""
    if _backend == "numba" and n_out + n_in > 0:
        flat = _x_spider_loop(dim, n_out, n_in)
        return flat.reshape((dim,) * (n_out + n_in))
    return _x_spider_numpy(dim, n_out, n_in)


def w_node_tensor(big: int, smalls) -> np.ndarray:
    """Square roots of multinomials; axes are the small legs then the big leg."""
    smalls = np.asarray(smalls, dtype=np.int64)
    if _backend == "numba" and len(smalls) > 0:
        flat = _w_node_loop(int(big), smalls)
        return flat.reshape(tuple(int(b) + 1 for b in smalls) + (big + 1,))
    return _w_node_numpy(int(big), smalls)


def diagonal_tensor(shape: tuple[int, ...], values) -> np.ndarray:
    """Tensor that is ``values[k]`` at index (k, ..., k) and zero elsewhere."""
    values = np.asarray(values, dtype=np.complex128)
    if not shape:
        return np.asarray(values.sum(), dtype=np.complex128)
    out = np.zeros(shape, dtype=np.complex128)
    stride = sum(out.strides) // out.itemsize
    out.reshape(-1)[np.arange(len(values)) * stride] = values
    return out
