"""Winograd/Toom-Cook convolution in canonical and monic-Legendre bases."""

from ._kernels import BACKEND, available_backends
from .construct import (InterpolationPoints, WinogradPlan, build_plan,
                        condition_number, plan_to_float, poly_from_roots)
from .errors import DimensionError, InvalidPointsError
from .harness import (ErrorReport, ExperimentConfig, condition_table,
                      load_tensor, run_error_benchmark, save_tensor)
from .legendre import BaseChange, build_base_change, monic_legendre
from .pipeline import (conv2d_winograd, transform_input, transform_output,
                       transform_weights)
from .quantize import (QuantConfig, QuantParams, StageStat, compute_scale,
                       conv2d_direct_quantized, conv2d_winograd_quantized,
                       fake_quant)
from .rational import Rational
from .reference import conv2d_direct, conv2d_direct_rational

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "available_backends",
    "Rational",
    "InterpolationPoints", "WinogradPlan", "poly_from_roots", "build_plan",
    "plan_to_float", "condition_number",
    "BaseChange", "monic_legendre", "build_base_change",
    "conv2d_direct", "conv2d_direct_rational",
    "transform_weights", "transform_input", "transform_output", "conv2d_winograd",
    "QuantParams", "QuantConfig", "StageStat", "compute_scale", "fake_quant",
    "conv2d_winograd_quantized", "conv2d_direct_quantized",
    "ExperimentConfig", "ErrorReport", "run_error_benchmark", "condition_table",
    "load_tensor", "save_tensor",
    "InvalidPointsError", "DimensionError",
    "__version__",
]
