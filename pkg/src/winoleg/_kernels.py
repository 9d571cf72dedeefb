"""Hot numeric kernels, numba-jitted with a pure-numpy fallback.

The backend is chosen once at import: set ``WINOLEG_BACKEND=numpy`` to force
the fallback, anything else (or unset) uses numba when it is importable.
Both backends implement the same three kernels:

  conv2d_direct_f64(x, w)        quadruple-loop valid cross-correlation
  sandwich(left, batch, right)   left @ t @ right for every t in the batch
  hadamard_accumulate(u, v)      transformed-domain product, summed over c_in

Accumulation over input channels is in fixed ascending order in every
implementation, so results are reproducible run to run within a backend.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def _conv2d_direct_np(x, w):
    c_out, c_in, k, _ = w.shape
    oh = x.shape[1] - k + 1
    ow = x.shape[2] - k + 1
    out = np.zeros((c_out, oh, ow))
    for oc in range(c_out):
        for c in range(c_in):
            for p in range(k):
                for q in range(k):
                    out[oc] += w[oc, c, p, q] * x[c, p:p + oh, q:q + ow]
    return out


def _sandwich_np(left, batch, right):
    return left @ batch @ right


def _hadamard_accumulate_np(u, v):
    # u: [c_out, c_in, m, m], v: [c_in, tiles, m, m] -> [c_out, tiles, m, m]
    return np.einsum("oimn,itmn->otmn", u, v)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _conv2d_direct_nb(x, w):
        c_out, c_in, k, _ = w.shape
        oh = x.shape[1] - k + 1
        ow = x.shape[2] - k + 1
        out = np.zeros((c_out, oh, ow))
        for oc in range(c_out):
            for c in range(c_in):
                for p in range(k):
                    for q in range(k):
                        wv = w[oc, c, p, q]
                        for i in range(oh):
                            for j in range(ow):
                                out[oc, i, j] += wv * x[c, i + p, j + q]
        return out

    @njit(cache=True)
    def _sandwich_nb(left, batch, right):
        n = batch.shape[0]
        a, b = left.shape
        c = batch.shape[2]
        d = right.shape[1]
        tmp = np.empty((b, d))
        out = np.empty((n, a, d))
        for t in range(n):
            for i in range(b):
                for j in range(d):
                    tmp[i, j] = 0.0
                for l in range(c):
                    v = batch[t, i, l]
                    for j in range(d):
                        tmp[i, j] += v * right[l, j]
            for i in range(a):
                for j in range(d):
                    out[t, i, j] = 0.0
                for l in range(b):
                    v = left[i, l]
                    for j in range(d):
                        out[t, i, j] += v * tmp[l, j]
        return out

    @njit(cache=True)
    def _hadamard_accumulate_nb(u, v):
        c_out, c_in, m, _ = u.shape
        tiles = v.shape[1]
        out = np.zeros((c_out, tiles, m, m))
        for oc in range(c_out):
            for t in range(tiles):
                for c in range(c_in):
                    for i in range(m):
                        for j in range(m):
                            out[oc, t, i, j] += u[oc, c, i, j] * v[c, t, i, j]
        return out


_IMPLS = {
    "numpy": {
        "conv2d_direct_f64": _conv2d_direct_np,
        "sandwich": _sandwich_np,
        "hadamard_accumulate": _hadamard_accumulate_np,
    }
}
if _HAVE_NUMBA:
    _IMPLS["numba"] = {
        "conv2d_direct_f64": _conv2d_direct_nb,
        "sandwich": _sandwich_nb,
        "hadamard_accumulate": _hadamard_accumulate_nb,
    }


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def get_impls(backend: str) -> dict:
    """Kernel table for an explicit backend (used by tests and benchmarks)."""
    return _IMPLS[backend]


_requested = os.environ.get("WINOLEG_BACKEND", "").strip().lower()
if _requested == "numpy" or not _HAVE_NUMBA:
    BACKEND = "numpy"
else:
    BACKEND = "numba"

conv2d_direct_f64 = _IMPLS[BACKEND]["conv2d_direct_f64"]
sandwich = _IMPLS[BACKEND]["sandwich"]
hadamard_accumulate = _IMPLS[BACKEND]["hadamard_accumulate"]
