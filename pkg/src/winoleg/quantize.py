"""Symmetric fake quantization and the bit-accurate quantized pipelines.

Quantization is symmetric and per tensor: integer levels span
[-(2^(bits-1)-1), +(2^(bits-1)-1)], the scale is max_abs/levels, rounding is
half to even.  Values that land on the clamp extremes dequantize to exactly
+/-max_abs, which makes fake_quant idempotent and negation-symmetric in
float64 (not just approximately).
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .construct import WinogradPlan
from .pipeline import run_pipeline
from .reference import conv2d_direct


@dataclass(frozen=True)
class QuantParams:
    """Per-tensor quantization parameters."""

    bits: int
    scale: float
    rounding: str = "half-even"

    def __post_init__(self):
        if self.bits < 2:
            raise ValueError(f"need at least 2 bits, got {self.bits}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def q_max(self) -> int:
        return 2 ** (self.bits - 1) - 1


@dataclass(frozen=True)
class QuantConfig:
    """Bit widths for every stage boundary of the quantized pipelines."""

    input_bits: int = 8
    weight_bits: int = 8
    input_transform_bits: int = 8
    weight_transform_bits: int = 8
    base_change_bits: int = 8
    hadamard_bits: int = 8
    output_transform_bits: int = 8

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 2:
                raise ValueError(f"{f.name} must be >= 2, got {getattr(self, f.name)}")

    @classmethod
    def uniform(cls, bits: int, hadamard_bits: int | None = None) -> "QuantConfig":
        h = bits if hadamard_bits is None else hadamard_bits
        return cls(input_bits=bits, weight_bits=bits, input_transform_bits=bits,
                   weight_transform_bits=bits, base_change_bits=bits,
                   hadamard_bits=h, output_transform_bits=bits)

    @classmethod
    def from_name(cls, name: str) -> "QuantConfig":
        """Parse names like "8b" (uniform) or "8b+9b" (wider Hadamard stage)."""
        parts = name.strip().lower().split("+")
        try:
            widths = [int(p.removesuffix("b")) for p in parts]
        except ValueError:
            widths = []
        if len(widths) == 1:
            return cls.uniform(widths[0])
        if len(widths) == 2:
            return cls.uniform(widths[0], hadamard_bits=widths[1])
        raise ValueError(f"cannot parse quantization config name {name!r}")


# Stage name (see pipeline.run_pipeline) -> QuantConfig field.
STAGE_BITS = {
    "input": "input_bits",
    "weights": "weight_bits",
    "weight_transform": "weight_transform_bits",
    "weight_base_change": "base_change_bits",
    "input_base_change": "base_change_bits",
    "input_transform": "input_transform_bits",
    "hadamard": "hadamard_bits",
    "output_base_change": "base_change_bits",
    "output": "output_transform_bits",
}


@dataclass(frozen=True)
class StageStat:
    """Observed range and scale of one stage cast, for reporting."""

    stage: str
    bits: int
    max_abs: float
    scale: float


def compute_scale(values, bits: int) -> QuantParams:
    """Symmetric per-tensor scale from the max absolute value (all-zero -> 1)."""
    arr = np.asarray(values, dtype=np.float64)
    q_max = 2 ** (bits - 1) - 1
    max_abs = float(np.max(np.abs(arr))) if arr.size else 0.0
    scale = max_abs / q_max if max_abs > 0 else 1.0
    return QuantParams(bits=bits, scale=scale)


def fake_quant(tensor: np.ndarray, bits: int) -> np.ndarray:
    """Quantize-dequantize at the given width; shape-preserving and idempotent."""
    arr = np.asarray(tensor, dtype=np.float64)
    max_abs = float(np.max(np.abs(arr))) if arr.size else 0.0
    if max_abs == 0.0:
        return arr.copy()
    params = compute_scale(arr, bits)
    q_max = params.q_max
    codes = np.clip(np.rint(arr / params.scale), -q_max, q_max)
    out = codes * params.scale
    # Snap the clamp extremes to +/-max_abs exactly; this pins the output range
    # and makes repeated application a no-op.
    out[codes == q_max] = max_abs
    out[codes == -q_max] = -max_abs
    return out


def conv2d_winograd_quantized(x: np.ndarray, w: np.ndarray, plan: WinogradPlan,
                              mode: str, qconfig: QuantConfig):
    """Winograd pipeline with fake quantization at every stage boundary.

    Channel accumulation in the transformed domain runs at full double
    precision and is cast once, at ``hadamard_bits``.  Returns the output
    tensor and the per-stage statistics in execution order.
    """
    stats: list[StageStat] = []

    def cast(stage: str, tensor: np.ndarray) -> np.ndarray:
        bits = getattr(qconfig, STAGE_BITS[stage])
        max_abs = float(np.max(np.abs(tensor))) if tensor.size else 0.0
        params = compute_scale(tensor, bits)
        stats.append(StageStat(stage=stage, bits=bits, max_abs=max_abs,
                               scale=params.scale))
        return fake_quant(tensor, bits)

    out = run_pipeline(x, w, plan, mode, cast=cast)
    return out, stats


def conv2d_direct_quantized(x: np.ndarray, w: np.ndarray,
                            qconfig: QuantConfig | None = None) -> np.ndarray:
    """Direct-convolution baseline: quantize input and weights, correlate in
    double precision (wide relative to the 8-bit grid), quantize the output.
    """
    if qconfig is None:
        qconfig = QuantConfig()
    xq = fake_quant(np.asarray(x, dtype=np.float64), qconfig.input_bits)
    wq = fake_quant(np.asarray(w, dtype=np.float64), qconfig.weight_bits)
    return fake_quant(conv2d_direct(xq, wq), qconfig.output_transform_bits)
