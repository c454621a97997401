"""Hardware parameter records and closed-form throughput/energy models.

Digital in-memory computing executes one gate per crossbar row per cycle at
full duty, so a kernel of latency L yields R*f/L element operations per
second from R total rows, at a power of R * gate_energy * f. The GPU side is
modeled by a memory-bandwidth bound (for streaming vector workloads) and the
datasheet compute peak.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, InvalidOperationError

GIB = 1 << 30


@dataclass(frozen=True)
class PimArch:
    name: str
    crossbar_rows: int
    crossbar_cols: int
    memory_bytes: int
    gate_energy: float          # joules per gate
    clock: float                # Hz

    def __post_init__(self):
        for f in ("crossbar_rows", "crossbar_cols", "memory_bytes"):
            if getattr(self, f) <= 0:
                raise InvalidOperationError(f"{f} must be positive")
        if self.gate_energy <= 0 or self.clock <= 0:
            raise InvalidOperationError("physical quantities must be positive")
        bits = self.memory_bytes * 8
        if bits % (self.crossbar_rows * self.crossbar_cols) != 0:
            raise InvalidOperationError(
                "memory size must be a whole number of crossbars")


@dataclass(frozen=True)
class PimDerived:
    num_crossbars: int
    total_rows: int
    max_power: float


@dataclass(frozen=True)
class GpuArch:
    name: str
    cores: int
    memory_bytes: int
    bandwidth: float            # bytes/s
    clock: float                # Hz
    max_power: float            # W
    peak_flops: float           # ops/s
    bandwidth_efficiency: float  # attained fraction of datasheet bandwidth

    def __post_init__(self):
        if not 0 < self.bandwidth_efficiency <= 1:
            raise InvalidOperationError("bandwidth efficiency must be in (0, 1]")


@dataclass(frozen=True)
class PerfResult:
    throughput: float           # operations per second
    power: float                # watts
    energy_efficiency: float    # operations per second per watt


def derive(arch: PimArch) -> PimDerived:
    """Crossbar count, total rows, and full-duty power for a memory size."""
    bits = arch.memory_bytes * 8
    num = bits // (arch.crossbar_rows * arch.crossbar_cols)
    rows = num * arch.crossbar_rows
    return PimDerived(
        num_crossbars=num,
        total_rows=rows,
        max_power=rows * arch.gate_energy * arch.clock,
    )


def pim_vector_perf(arch: PimArch, latency_cycles: int) -> PerfResult:
    """Element-parallel vector op: all rows progress one gate per cycle."""
    if latency_cycles < 1:
        raise InvalidOperationError("latency must be >= 1 cycle")
    d = derive(arch)
    return PerfResult(
        throughput=d.total_rows * arch.clock / latency_cycles,
        power=d.max_power,
        energy_efficiency=1.0 / (latency_cycles * arch.gate_energy),
    )


def gpu_membound_perf(gpu: GpuArch, bytes_per_element_op: float) -> PerfResult:
    """Streaming bound: two operands in, one result out through DRAM."""
    if bytes_per_element_op <= 0:
        raise InvalidOperationError("bytes per element op must be positive")
    tput = gpu.bandwidth_efficiency * gpu.bandwidth / bytes_per_element_op
    return PerfResult(tput, gpu.max_power, tput / gpu.max_power)


def gpu_peak_perf(gpu: GpuArch) -> PerfResult:
    return PerfResult(gpu.peak_flops, gpu.max_power, gpu.peak_flops / gpu.max_power)


def improvement_ratio(pim: PerfResult, gpu: PerfResult) -> float:
    if gpu.throughput <= 0:
        raise InvalidOperationError("gpu throughput must be positive")
    return pim.throughput / gpu.throughput


def vector_improvement_closed_form(arch: PimArch, gpu: GpuArch, cc) -> float:
    """PIM/memory-bound-GPU ratio for two-in/one-out vector ops.

    Algebraically R*f / (8 * eta * BW * CC): the operand width cancels, so the
    ratio depends on the kernel only through its compute complexity.
    """
    d = derive(arch)
    return d.total_rows * arch.clock / (
        8.0 * gpu.bandwidth_efficiency * gpu.bandwidth * float(cc))


#: Table-mirror presets.
MEMRISTIVE = PimArch("memristive", 1024, 1024, 48 * GIB, 6.4e-15, 333e6)
DRAM = PimArch("dram", 65536, 1024, 48 * GIB, 391e-15, 0.5e6)
A6000 = GpuArch("a6000", cores=10752, memory_bytes=48 * GIB, bandwidth=768e9,
                clock=1410e6, max_power=300.0, peak_flops=3.87e13,
                bandwidth_efficiency=0.897)


def pim_from_dict(name: str, d: dict) -> PimArch:
    try:
        return PimArch(
            name=name,
            crossbar_rows=int(d["crossbar_rows"]),
            crossbar_cols=int(d["crossbar_cols"]),
            memory_bytes=int(d["memory_bytes"]),
            gate_energy=float(d["gate_energy"]),
            clock=float(d["clock"]),
        )
    except KeyError as exc:
        raise ConfigError(f"architecture {name!r} missing key {exc}") from None


def gpu_from_dict(name: str, d: dict) -> GpuArch:
    try:
        return GpuArch(
            name=name,
            cores=int(d["cores"]),
            memory_bytes=int(d["memory_bytes"]),
            bandwidth=float(d["bandwidth"]),
            clock=float(d["clock"]),
            max_power=float(d["max_power"]),
            peak_flops=float(d["peak_flops"]),
            bandwidth_efficiency=float(d["bandwidth_efficiency"]),
        )
    except KeyError as exc:
        raise ConfigError(f"gpu {name!r} missing key {exc}") from None


def load_architectures(path: str | Path) -> tuple[dict[str, PimArch], dict[str, GpuArch]]:
    """Read PIM and GPU records from a JSON config file."""
    with open(path) as fh:
        data = json.load(fh)
    pims = {n: pim_from_dict(n, d) for n, d in data.get("architectures", {}).items()}
    gpus = {n: gpu_from_dict(n, d) for n, d in data.get("gpu", {}).items()}
    return pims, gpus
