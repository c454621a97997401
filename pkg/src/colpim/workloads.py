"""Workload performance models: batched matmul, 2D convolution, CNN inference.

Matrix workloads map one output element per memory row and execute the MAC
chain as serial vectored float multiply+add steps; concurrent units are
however many operand sets fit in the total rows. This is the zero-overhead
upper-bound model: inter-crossbar data movement is free and occupancy is
full.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .archmodel import GpuArch, PimArch, PerfResult, derive
from .errors import ConfigError, InvalidOperationError, WorkloadTooLargeError
from .formats import NumberFormat, single


@dataclass(frozen=True)
class MatmulWorkload:
    n: int                                   # square matrices, n x n
    format: NumberFormat = field(default_factory=single)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidOperationError("matrix dimension must be >= 1")


@dataclass(frozen=True)
class ConvWorkload:
    width: int
    height: int
    k: int                                   # k x k kernel
    format: NumberFormat = field(default_factory=single)

    def __post_init__(self):
        if not (self.width >= self.k >= 1 and self.height >= self.k):
            raise InvalidOperationError("need W, H >= k >= 1")


@dataclass(frozen=True)
class LayerSpec:
    kind: str                                # "conv2d" | "linear"
    name: str = ""
    # conv2d fields
    in_channels: int = 0
    out_channels: int = 0
    kernel_h: int = 0
    kernel_w: int = 0
    stride: int = 1
    padding: int = 0
    input_h: int = 0
    input_w: int = 0
    # linear fields
    in_features: int = 0
    out_features: int = 0

    def out_hw(self) -> tuple[int, int]:
        oh = (self.input_h + 2 * self.padding - self.kernel_h) // self.stride + 1
        ow = (self.input_w + 2 * self.padding - self.kernel_w) // self.stride + 1
        return oh, ow


@dataclass(frozen=True)
class CnnModel:
    name: str
    layers: tuple
    input_shape: tuple = (224, 224, 3)


def layer_macs(layer: LayerSpec) -> int:
    """Multiply-accumulate count of one layer (bias and activations excluded)."""
    if layer.kind == "conv2d":
        if min(layer.in_channels, layer.out_channels, layer.kernel_h,
               layer.kernel_w, layer.stride, layer.input_h, layer.input_w) < 1:
            raise InvalidOperationError(f"inconsistent conv2d layer {layer.name!r}")
        oh, ow = layer.out_hw()
        if oh < 1 or ow < 1:
            raise InvalidOperationError(
                f"layer {layer.name!r} has empty output {oh}x{ow}")
        return oh * ow * layer.out_channels * layer.in_channels \
            * layer.kernel_h * layer.kernel_w
    if layer.kind == "linear":
        if layer.in_features < 1 or layer.out_features < 1:
            raise InvalidOperationError(f"inconsistent linear layer {layer.name!r}")
        return layer.in_features * layer.out_features
    raise InvalidOperationError(f"unknown layer kind {layer.kind!r}")


def layer_elements(layer: LayerSpec) -> int:
    """Tensor elements touched: weights plus input and output activations."""
    if layer.kind == "conv2d":
        oh, ow = layer.out_hw()
        weights = layer.in_channels * layer.out_channels * layer.kernel_h * layer.kernel_w
        return (weights + layer.input_h * layer.input_w * layer.in_channels
                + oh * ow * layer.out_channels)
    return (layer.in_features * layer.out_features
            + layer.in_features + layer.out_features)


def model_macs(model: CnnModel) -> int:
    return sum(layer_macs(l) for l in model.layers)


def model_elements(model: CnnModel) -> int:
    return sum(layer_elements(l) for l in model.layers)


def _mac_cycles(latencies) -> int:
    """latencies: (l_mult, l_add) cycles for the element format."""
    l_mult, l_add = latencies
    return int(l_mult) + int(l_add)


def matmul_perf(arch: PimArch, w: MatmulWorkload, latencies) -> PerfResult:
    """Batched n x n matmul: n^2 rows per pair, n serial MAC steps."""
    d = derive(arch)
    rows_needed = w.n * w.n
    if rows_needed > d.total_rows:
        raise WorkloadTooLargeError(
            f"matmul n={w.n} needs {rows_needed} rows > {d.total_rows}")
    units = d.total_rows // rows_needed
    cycles = w.n * _mac_cycles(latencies)
    tput = units * arch.clock / cycles
    return PerfResult(tput, d.max_power, tput / d.max_power)


def matmul_gpu_peak(gpu: GpuArch, w: MatmulWorkload) -> PerfResult:
    tput = gpu.peak_flops / (2.0 * w.n ** 3)     # 2 flops per MAC
    return PerfResult(tput, gpu.max_power, tput / gpu.max_power)


def conv_perf(arch: PimArch, w: ConvWorkload, latencies) -> PerfResult:
    """2D convolution: one output pixel per row, k^2 serial MAC steps."""
    d = derive(arch)
    rows_needed = w.width * w.height
    if rows_needed > d.total_rows:
        raise WorkloadTooLargeError(
            f"conv {w.width}x{w.height} needs {rows_needed} rows > {d.total_rows}")
    units = d.total_rows // rows_needed
    cycles = w.k * w.k * _mac_cycles(latencies)
    tput = units * arch.clock / cycles
    return PerfResult(tput, d.max_power, tput / d.max_power)


def cnn_perf(arch: PimArch, macs: int | CnnModel, latencies) -> PerfResult:
    """Upper-bound inference rate: every MAC fully row-parallel."""
    if isinstance(macs, CnnModel):
        macs = model_macs(macs)
    d = derive(arch)
    tput = d.total_rows * arch.clock / (macs * _mac_cycles(latencies))
    return PerfResult(tput, d.max_power, tput / d.max_power)


def cnn_gpu_peak(gpu: GpuArch, macs: int | CnnModel) -> PerfResult:
    if isinstance(macs, CnnModel):
        macs = model_macs(macs)
    tput = gpu.peak_flops / (2.0 * macs)
    return PerfResult(tput, gpu.max_power, tput / gpu.max_power)


def data_reuse(workload) -> float:
    """Operations per distinct data element touched."""
    if isinstance(workload, MatmulWorkload):
        return float(workload.n)                 # n^3 ops over n^2 data
    if isinstance(workload, ConvWorkload):
        return float(workload.k ** 2)            # WHk^2 ops over WH data
    if isinstance(workload, CnnModel):
        return model_macs(workload) / model_elements(workload)
    if workload == "vector":
        return 1.0
    raise InvalidOperationError(f"no reuse model for {workload!r}")


# -- model files ---------------------------------------------------------------

MODEL_SCHEMA = "colpim-cnn/1"
MODELS_DIR = Path(__file__).parent / "models"


def load_model(path: str | Path, include_aux: bool = False,
               published_kernels: bool = False) -> CnnModel:
    """Read a CNN layer file.

    include_aux: keep layers marked as auxiliary-classifier heads.
    published_kernels: where a layer records a published_kernel size differing
    from the implemented one, count it at the published size instead.
    """
    with open(path) as fh:
        data = json.load(fh)
    if data.get("schema") != MODEL_SCHEMA:
        raise ConfigError(f"unsupported model schema {data.get('schema')!r}")
    layers = []
    for entry in data["layers"]:
        entry = dict(entry)
        group = entry.pop("group", "")
        if group.startswith("aux") and not include_aux:
            continue
        pub = entry.pop("published_kernel", None)
        pub_pad = entry.pop("published_padding", None)
        if published_kernels and pub is not None:
            entry["kernel_h"] = entry["kernel_w"] = int(pub)
            if pub_pad is not None:
                entry["padding"] = int(pub_pad)
        layers.append(LayerSpec(**entry))
    return CnnModel(name=data["name"], layers=tuple(layers),
                    input_shape=tuple(data.get("input", (224, 224, 3))))


def bundled_models() -> dict[str, Path]:
    return {p.stem: p for p in sorted(MODELS_DIR.glob("*.json"))}


def load_bundled(name: str, **kwargs) -> CnnModel:
    models = bundled_models()
    if name not in models:
        raise ConfigError(f"no bundled model {name!r} (have {sorted(models)})")
    return load_model(models[name], **kwargs)
