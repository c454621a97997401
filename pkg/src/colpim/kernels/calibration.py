"""Kernel latency table used by the analytical performance layer.

The calibrated values reproduce the published figure points (compute
complexity x 3N io bits); measured values come from the programs this package
actually builds. The two are kept separate so model reproduction does not
depend on the specific gate decomposition chosen here.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import ConfigError
from ..formats import NumberFormat, by_name
from .fixed import build_fixed_add, build_fixed_mult
from .floating import build_float_add, build_float_mult

#: (operation, format name) -> cycles, anchored to the reference figure points.
CALIBRATED_LATENCIES: dict[tuple[str, str], int] = {
    ("add", "fixed16"): 289,
    ("add", "fixed32"): 578,
    ("mult", "fixed16"): 4944,
    ("mult", "fixed32"): 18144,
    ("add", "fp16"): 1989,
    ("add", "fp32"): 3978,
    ("mult", "fp16"): 2779,
    ("mult", "fp32"): 11616,
}


def _fmt_key(fmt: NumberFormat | str) -> str:
    if isinstance(fmt, str):
        fmt = by_name(fmt)
    if fmt.kind == "fixed":
        return f"fixed{fmt.total_bits}"      # signedness does not change latency
    return fmt.name


def build_kernel(op: str, fmt: NumberFormat | str):
    if isinstance(fmt, str):
        fmt = by_name(fmt)
    builders = {
        ("add", "fixed"): build_fixed_add,
        ("mult", "fixed"): build_fixed_mult,
        ("add", "float"): build_float_add,
        ("mult", "float"): build_float_mult,
    }
    try:
        return builders[(op, fmt.kind)](fmt)
    except KeyError:
        raise ConfigError(f"no kernel for op={op!r} format={fmt.name}") from None


def calibrated_latency(op: str, fmt: NumberFormat | str) -> int:
    key = (op, _fmt_key(fmt))
    if key not in CALIBRATED_LATENCIES:
        raise ConfigError(f"no calibrated latency for {key}")
    return CALIBRATED_LATENCIES[key]


@lru_cache(maxsize=None)
def _measured(op: str, fmt_name: str) -> int:
    return build_kernel(op, fmt_name).latency_cycles


def measured_latency(op: str, fmt: NumberFormat | str) -> int:
    if not isinstance(fmt, str):
        fmt = fmt.name
    return _measured(op, fmt)


def kernel_latency(op: str, fmt: NumberFormat | str, mode: str = "calibrated") -> int:
    if mode == "calibrated":
        return calibrated_latency(op, fmt)
    if mode == "measured":
        return measured_latency(op, fmt)
    raise ConfigError(f"unknown latency mode {mode!r}")
