"""Direct-convolution oracles: the ground truth for every other path.

Both functions compute valid cross-correlation (no kernel flip), summed over
input channels in ascending order.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DimensionError
from .rational import Rational


def check_conv_args(x: np.ndarray, w: np.ndarray) -> tuple[int, int, int, int, int]:
    """Validate [c_in, H, W] input against [c_out, c_in, k, k] weights."""
    if x.ndim != 3:
        raise DimensionError(f"input must be [c_in, H, W], got shape {x.shape}")
    if w.ndim != 4:
        raise DimensionError(f"weights must be [c_out, c_in, k, k], got shape {w.shape}")
    c_out, c_in, k, k2 = w.shape
    if k != k2:
        raise DimensionError(f"kernel must be square, got {k}x{k2}")
    if x.shape[0] != c_in:
        raise DimensionError(
            f"channel mismatch: input has {x.shape[0]}, weights expect {c_in}")
    _, h, wdt = x.shape
    if h < k or wdt < k:
        raise DimensionError(f"input {h}x{wdt} is smaller than the {k}x{k} kernel")
    return c_out, c_in, k, h, wdt


def conv2d_direct(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Float64 direct correlation of [c_in, H, W] with [c_out, c_in, k, k]."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    check_conv_args(x, w)
    return _kernels.conv2d_direct_f64(x, w)


def conv2d_direct_rational(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Exact-rational direct correlation; same definition, object-dtype arrays."""
    c_out, c_in, k, h, wdt = check_conv_args(x, w)
    oh, ow = h - k + 1, wdt - k + 1
    out = np.empty((c_out, oh, ow), dtype=object)
    for oc in range(c_out):
        for i in range(oh):
            for j in range(ow):
                acc = Rational(0)
                for c in range(c_in):
                    for p in range(k):
                        for q in range(k):
                            acc += x[c, i + p, j + q] * w[oc, c, p, q]
                out[oc, i, j] = acc
    return out
