"""Bit-serial arithmetic kernels as straight-line column programs."""

from .program import (ColumnProgram, KernelReport, VerificationReport, Mismatch,
                      measure, verify_kernel, host_oracle, run_cases)
from .fixed import build_fixed_add, build_fixed_mult
from .floating import build_float_add, build_float_mult
from .calibration import (CALIBRATED_LATENCIES, calibrated_latency, measured_latency,
                          kernel_latency, build_kernel)

__all__ = [
    "ColumnProgram", "KernelReport", "VerificationReport", "Mismatch",
    "measure", "verify_kernel", "host_oracle", "run_cases",
    "build_fixed_add", "build_fixed_mult", "build_float_add", "build_float_mult",
    "CALIBRATED_LATENCIES", "calibrated_latency", "measured_latency",
    "kernel_latency", "build_kernel",
]
