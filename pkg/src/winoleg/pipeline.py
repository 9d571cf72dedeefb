"""Winograd convolution dataflow in canonical or Legendre polynomial base.

The tiled pipeline runs in stages; canonical mode applies one sandwich
product per transform, Legendre mode splits each transform into a
Vandermonde sandwich (with the base-changed matrices G_P, B_P, A_P) and a
base-change sandwich (with P_inv).  Both orders are fixed so that the two
modes agree exactly in exact arithmetic:

  weights:  G@W@G.T            == P_inv @ (G_P@W@G_P.T) @ P_inv.T
  input:    B.T@X@B            == B_P.T @ (P_inv.T@X@P_inv) @ B_P
  output:   A.T@M@A            == A_P.T @ (P_inv.T@M@P_inv) @ A_P

Every stage boundary passes through a cast hook; the float pipeline uses the
identity, the quantized pipeline (see ``quantize``) inserts fake
quantization.  Stage names, in execution order:

  canonical: input, weights, weight_transform, input_transform, hadamard,
             output
  legendre:  input, weights, weight_transform, weight_base_change,
             input_base_change, input_transform, hadamard,
             output_base_change, output
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .construct import WinogradPlan, plan_to_float
from .errors import DimensionError
from .reference import check_conv_args

BASE_MODES = ("canonical", "legendre")


def _require_mode(plan: WinogradPlan, mode: str) -> None:
    if mode not in BASE_MODES:
        raise ValueError(f"unknown base mode {mode!r}, expected one of {BASE_MODES}")
    if mode == "legendre" and plan.base_change is None:
        raise ValueError("legendre mode needs a plan built with use_legendre=True")


def transform_weights(w_tile: np.ndarray, plan: WinogradPlan, mode: str = "canonical") -> np.ndarray:
    """Map a k x k weight tile into the m x m transformed domain."""
    _require_mode(plan, mode)
    w_tile = np.asarray(w_tile)
    if w_tile.shape != (plan.k, plan.k):
        raise DimensionError(f"weight tile must be {plan.k}x{plan.k}, got {w_tile.shape}")
    if mode == "canonical":
        return plan.G @ w_tile @ plan.G.T
    p_inv = plan.base_change.P_inv
    return p_inv @ (plan.G_P @ w_tile @ plan.G_P.T) @ p_inv.T


def transform_input(x_tile: np.ndarray, plan: WinogradPlan, mode: str = "canonical") -> np.ndarray:
    """Map an m x m input tile into the transformed domain."""
    _require_mode(plan, mode)
    x_tile = np.asarray(x_tile)
    if x_tile.shape != (plan.m, plan.m):
        raise DimensionError(f"input tile must be {plan.m}x{plan.m}, got {x_tile.shape}")
    if mode == "canonical":
        return plan.B.T @ x_tile @ plan.B
    p_inv = plan.base_change.P_inv
    return plan.B_P.T @ (p_inv.T @ x_tile @ p_inv) @ plan.B_P


def transform_output(m_tile: np.ndarray, plan: WinogradPlan, mode: str = "canonical") -> np.ndarray:
    """Map an m x m transformed-domain tile back to the o x o output tile."""
    _require_mode(plan, mode)
    m_tile = np.asarray(m_tile)
    if m_tile.shape != (plan.m, plan.m):
        raise DimensionError(f"tile must be {plan.m}x{plan.m}, got {m_tile.shape}")
    if mode == "canonical":
        return plan.A.T @ m_tile @ plan.A
    p_inv = plan.base_change.P_inv
    return plan.A_P.T @ (p_inv.T @ m_tile @ p_inv) @ plan.A_P


def _extract_tiles(x: np.ndarray, o: int, m: int):
    """Zero-pad so output extents round up to multiples of o, cut m x m patches."""
    k = m - o + 1
    c_in, h, w = x.shape
    oh, ow = h - k + 1, w - k + 1
    th = -(-oh // o)
    tw = -(-ow // o)
    hp, wp = (th - 1) * o + m, (tw - 1) * o + m
    xp = np.zeros((c_in, hp, wp))
    xp[:, :h, :w] = x
    windows = np.lib.stride_tricks.sliding_window_view(xp, (m, m), axis=(1, 2))
    tiles = np.ascontiguousarray(windows[:, ::o, ::o]).reshape(c_in, th * tw, m, m)
    return tiles, (th, tw, oh, ow)


def _scatter_tiles(y: np.ndarray, geometry) -> np.ndarray:
    th, tw, oh, ow = geometry
    c_out, _, o, _ = y.shape
    full = y.reshape(c_out, th, tw, o, o).transpose(0, 1, 3, 2, 4).reshape(
        c_out, th * o, tw * o)
    return np.ascontiguousarray(full[:, :oh, :ow])


def _identity_cast(stage: str, tensor: np.ndarray) -> np.ndarray:
    return tensor


def run_pipeline(x: np.ndarray, w: np.ndarray, plan: WinogradPlan, mode: str,
                 cast=_identity_cast) -> np.ndarray:
    """Tiled multi-channel Winograd correlation with a per-stage cast hook."""
    _require_mode(plan, mode)
    if plan.is_exact:
        plan = plan_to_float(plan)
    x = np.ascontiguousarray(x, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    c_out, c_in, k, _, _ = check_conv_args(x, w)
    if k != plan.k:
        raise DimensionError(f"plan is for k={plan.k}, weights have k={k}")
    o, m = plan.o, plan.m

    x = cast("input", x)
    w = cast("weights", w)
    tiles, geometry = _extract_tiles(x, o, m)
    n_tiles = tiles.shape[1]

    w_flat = np.ascontiguousarray(w.reshape(c_out * c_in, k, k))
    x_flat = np.ascontiguousarray(tiles.reshape(c_in * n_tiles, m, m))
    if mode == "canonical":
        u = _kernels.sandwich(plan.G, w_flat, np.ascontiguousarray(plan.G.T))
        u = cast("weight_transform", u)
        v = _kernels.sandwich(np.ascontiguousarray(plan.B.T), x_flat, plan.B)
        v = cast("input_transform", v)
    else:
        p_inv = plan.base_change.P_inv
        p_inv_t = np.ascontiguousarray(p_inv.T)
        u = _kernels.sandwich(plan.G_P, w_flat, np.ascontiguousarray(plan.G_P.T))
        u = cast("weight_transform", u)
        u = _kernels.sandwich(p_inv, np.ascontiguousarray(u), p_inv_t)
        u = cast("weight_base_change", u)
        v = _kernels.sandwich(p_inv_t, x_flat, p_inv)
        v = cast("input_base_change", v)
        v = _kernels.sandwich(np.ascontiguousarray(plan.B_P.T), np.ascontiguousarray(v), plan.B_P)
        v = cast("input_transform", v)

    acc = _kernels.hadamard_accumulate(
        np.ascontiguousarray(u.reshape(c_out, c_in, m, m)),
        np.ascontiguousarray(v.reshape(c_in, n_tiles, m, m)))
    acc = cast("hadamard", acc)

    acc_flat = np.ascontiguousarray(acc.reshape(c_out * n_tiles, m, m))
    if mode == "canonical":
        y = _kernels.sandwich(np.ascontiguousarray(plan.A.T), acc_flat, plan.A)
    else:
        p_inv = plan.base_change.P_inv
        mid = _kernels.sandwich(np.ascontiguousarray(p_inv.T), acc_flat, p_inv)
        mid = cast("output_base_change", mid)
        y = _kernels.sandwich(np.ascontiguousarray(plan.A_P.T), np.ascontiguousarray(mid), plan.A_P)
    # crop before the final cast so the output scale ignores padding spill
    out = _scatter_tiles(y.reshape(c_out, n_tiles, o, o), geometry)
    return cast("output", out)


def conv2d_winograd(x: np.ndarray, w: np.ndarray, plan: WinogradPlan,
                    mode: str = "canonical") -> np.ndarray:
    """Double-precision Winograd correlation of [c_in, H, W] with [c_out, c_in, k, k]."""
    return run_pipeline(x, w, plan, mode)
