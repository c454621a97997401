"""Scenario execution: computes model values and compares them to references.

Exit-code contract is decided from the produced rows: a row whose tolerance is
set and whose relative error exceeds it is a violation. Rows with reference
but no tolerance are informational (e.g. measured-mode 16-bit kernels, whose
gate decompositions legitimately differ from the calibrated points; the
acceptance gate constrains the 32-bit kernels).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import archmodel, workloads
from .archmodel import GpuArch, PimArch
from .errors import ConfigError
from .formats import by_name
from .kernels import CALIBRATED_LATENCIES, measured_latency
from .reference import ReferenceData, implied_mac_counts

DEFAULT_CONFIG = Path(__file__).parent / "config" / "default.json"

_FIG3_LABEL = {("add", "fixed32"): "add32", ("mult", "fixed32"): "mult32",
               ("add", "fp32"): "fpadd32", ("mult", "fp32"): "fpmult32"}
_FIG4_LABEL = {("add", "fixed16"): "add16_32", ("add", "fixed32"): "add16_32",
               ("add", "fp16"): "fpadd16_32", ("add", "fp32"): "fpadd16_32",
               ("mult", "fixed16"): "mult16", ("mult", "fixed32"): "mult32",
               ("mult", "fp16"): "fpmult16", ("mult", "fp32"): "fpmult32"}


@dataclass
class Scenario:
    name: str
    benchmark: str
    architectures: list[str]
    gpu: str
    latency_mode: str = "calibrated"
    eta: float | None = None
    params: dict = field(default_factory=dict)

    @classmethod
    def from_config(cls, name: str, raw: dict, latency_mode: str,
                    eta: float | None) -> "Scenario":
        raw = dict(raw)
        try:
            benchmark = raw.pop("benchmark")
            archs = list(raw.pop("architectures"))
            gpu = raw.pop("gpu")
        except KeyError as exc:
            raise ConfigError(f"scenario {name!r} missing key {exc}") from None
        return cls(name=name, benchmark=benchmark, architectures=archs, gpu=gpu,
                   latency_mode=latency_mode, eta=eta, params=raw)


@dataclass
class ReportRow:
    scenario: str
    architecture: str
    label: str
    metric: str
    computed: float
    reference: float | None = None
    rel_err: float | None = None
    tolerance: float | None = None

    def __post_init__(self):
        if self.reference is not None and self.rel_err is None:
            self.rel_err = abs(self.computed - self.reference) / abs(self.reference)

    @property
    def ok(self) -> bool | None:
        if self.rel_err is None or self.tolerance is None:
            return None
        return self.rel_err <= self.tolerance


@dataclass
class Config:
    pims: dict[str, PimArch]
    gpus: dict[str, GpuArch]
    calibrated: dict[tuple[str, str], int]
    scenarios: dict[str, dict]

    @classmethod
    def load(cls, path: str | Path = DEFAULT_CONFIG) -> "Config":
        with open(path) as fh:
            data = json.load(fh)
        pims = {n: archmodel.pim_from_dict(n, d)
                for n, d in data.get("architectures", {}).items()}
        gpus = {n: archmodel.gpu_from_dict(n, d)
                for n, d in data.get("gpu", {}).items()}
        cal = {}
        for key, cycles in data.get("calibrated_latencies", {}).items():
            op, fmt = key.split(",")
            cal[(op, fmt)] = int(cycles)
        return cls(pims=pims, gpus=gpus, calibrated=cal,
                   scenarios=data.get("scenarios", {}))


class Bench:
    def __init__(self, config: Config, reference: ReferenceData):
        self.config = config
        self.reference = reference

    # -- helpers ------------------------------------------------------------

    def _resolve(self, scenario: Scenario) -> tuple[list[PimArch], GpuArch]:
        try:
            pims = [self.config.pims[a] for a in scenario.architectures]
        except KeyError as exc:
            raise ConfigError(f"unknown architecture {exc}") from None
        if scenario.gpu not in self.config.gpus:
            raise ConfigError(f"unknown gpu {scenario.gpu!r}")
        gpu = self.config.gpus[scenario.gpu]
        if scenario.eta is not None:
            gpu = archmodel.GpuArch(**{**gpu.__dict__, "bandwidth_efficiency": scenario.eta})
        return pims, gpu

    def _latency(self, op: str, fmt_name: str, mode: str) -> int:
        if mode == "calibrated":
            key = (op, fmt_name)
            if key not in self.config.calibrated:
                raise ConfigError(f"no calibrated latency for {key}")
            return self.config.calibrated[key]
        if mode == "measured":
            return measured_latency(op, fmt_name)
        raise ConfigError(f"unknown latency mode {mode!r}")

    def _mac_latencies(self, scenario: Scenario) -> tuple[int, int]:
        return (self._latency("mult", "fp32", scenario.latency_mode),
                self._latency("add", "fp32", scenario.latency_mode))

    def _pim_tol(self, scenario: Scenario, bits: int, base: float) -> float | None:
        if scenario.latency_mode == "measured":
            return 0.25 if bits == 32 else None
        return base

    # -- benchmarks ----------------------------------------------------------

    def run(self, scenario: Scenario) -> list[ReportRow]:
        fn = {"arith": self.bench_arith, "inverse-law": self.bench_inverse_law,
              "matmul": self.bench_matmul, "conv": self.bench_conv,
              "cnn": self.bench_cnn}.get(scenario.benchmark)
        if fn is None:
            raise ConfigError(f"unknown benchmark {scenario.benchmark!r}")
        return fn(scenario)

    def bench_arith(self, sc: Scenario) -> list[ReportRow]:
        pims, gpu = self._resolve(sc)
        kernels = [tuple(k) for k in sc.params.get("kernels", [])]
        rows: list[ReportRow] = []
        ref = self.reference
        for op, fmt_name in kernels:
            fmt = by_name(fmt_name)
            label = _FIG3_LABEL.get((op, fmt_name), f"{op}-{fmt_name}")
            lat = self._latency(op, fmt_name, sc.latency_mode)
            tol = self._pim_tol(sc, fmt.total_bits, 0.01)
            for arch in pims:
                perf = archmodel.pim_vector_perf(arch, lat)
                rows.append(ReportRow(sc.name, arch.name, label, "throughput",
                                      perf.throughput,
                                      ref.get("fig3", arch.name, label, "throughput"),
                                      tolerance=tol))
                rows.append(ReportRow(sc.name, arch.name, label, "energy_eff",
                                      perf.energy_efficiency,
                                      ref.get("fig3", arch.name, label, "energy_eff"),
                                      tolerance=tol))
            mem = archmodel.gpu_membound_perf(gpu, 3 * fmt.total_bits / 8)
            rows.append(ReportRow(sc.name, "gpu_membound", label, "throughput",
                                  mem.throughput,
                                  ref.get("fig3", "gpu_experimental", label, "throughput"),
                                  tolerance=0.01))
            rows.append(ReportRow(sc.name, "gpu_membound", label, "energy_eff",
                                  mem.energy_efficiency,
                                  ref.get("fig3", "gpu_experimental", label, "energy_eff"),
                                  tolerance=None))   # measured power varies
            peak = archmodel.gpu_peak_perf(gpu)
            rows.append(ReportRow(sc.name, "gpu_peak", label, "throughput",
                                  peak.throughput,
                                  ref.get("fig3", "gpu_peak", label, "throughput"),
                                  tolerance=0.01))
            rows.append(ReportRow(sc.name, "gpu_peak", label, "energy_eff",
                                  peak.energy_efficiency,
                                  ref.get("fig3", "gpu_peak", label, "energy_eff"),
                                  tolerance=0.01))
        return rows

    def bench_inverse_law(self, sc: Scenario) -> list[ReportRow]:
        pims, gpu = self._resolve(sc)
        kernels = [tuple(k) for k in sc.params.get("kernels", [])]
        rows: list[ReportRow] = []
        ref = self.reference
        products: dict[str, list[tuple]] = {a.name: [] for a in pims}
        for op, fmt_name in kernels:
            fmt = by_name(fmt_name)
            label = _FIG4_LABEL.get((op, fmt_name), f"{op}-{fmt_name}")
            lat = self._latency(op, fmt_name, sc.latency_mode)
            cc = Fraction(lat, 3 * fmt.total_bits)
            tol = self._pim_tol(sc, fmt.total_bits, 0.02)
            mem = archmodel.gpu_membound_perf(gpu, 3 * fmt.total_bits / 8)
            for arch in pims:
                perf = archmodel.pim_vector_perf(arch, lat)
                ratio = archmodel.improvement_ratio(perf, mem)
                rows.append(ReportRow(sc.name, arch.name, label, "cc", float(cc),
                                      ref.get("fig4", arch.name, label, "cc"),
                                      tolerance=tol))
                rows.append(ReportRow(sc.name, arch.name, label, "ratio", ratio,
                                      ref.get("fig4", arch.name, label, "ratio"),
                                      tolerance=tol))
                products[arch.name].append((label, float(cc) * ratio))
        # invariant: cc * ratio is an architecture constant
        for arch_name, pts in products.items():
            if not pts:
                continue
            mean = sum(p for _, p in pts) / len(pts)
            for label, p in pts:
                rows.append(ReportRow(sc.name, arch_name, label, "cc_x_ratio",
                                      p, mean, tolerance=0.02))
        return rows

    def bench_matmul(self, sc: Scenario) -> list[ReportRow]:
        pims, gpu = self._resolve(sc)
        sizes = sc.params.get("sizes", [32, 128, 512, 2048])
        lat = self._mac_latencies(sc)
        tol = self._pim_tol(sc, 32, 0.01)
        rows: list[ReportRow] = []
        ref = self.reference
        for n in sizes:
            w = workloads.MatmulWorkload(n)
            label = f"n{n}"
            for arch in pims:
                perf = workloads.matmul_perf(arch, w, lat)
                for metric, val in (("throughput", perf.throughput),
                                    ("energy_eff", perf.energy_efficiency)):
                    rows.append(ReportRow(sc.name, arch.name, label, metric, val,
                                          ref.get("fig5", arch.name, label, metric),
                                          tolerance=tol))
            peak = workloads.matmul_gpu_peak(gpu, w)
            for metric, val in (("throughput", peak.throughput),
                                ("energy_eff", peak.energy_efficiency)):
                rows.append(ReportRow(sc.name, "gpu_peak", label, metric, val,
                                      ref.get("fig5", "gpu_peak", label, metric),
                                      tolerance=0.01))
            rows.append(ReportRow(sc.name, "all", label, "data_reuse",
                                  workloads.data_reuse(w)))
        return rows

    def bench_conv(self, sc: Scenario) -> list[ReportRow]:
        pims, _gpu = self._resolve(sc)
        w = workloads.ConvWorkload(sc.params.get("width", 1024),
                                   sc.params.get("height", 1024),
                                   sc.params.get("k", 3))
        lat = self._mac_latencies(sc)
        label = f"{w.width}x{w.height}k{w.k}"
        rows = []
        for arch in pims:
            perf = workloads.conv_perf(arch, w, lat)
            rows.append(ReportRow(sc.name, arch.name, label, "throughput",
                                  perf.throughput))
            rows.append(ReportRow(sc.name, arch.name, label, "energy_eff",
                                  perf.energy_efficiency))
        rows.append(ReportRow(sc.name, "all", label, "data_reuse",
                              workloads.data_reuse(w)))
        return rows

    def bench_cnn(self, sc: Scenario) -> list[ReportRow]:
        pims, gpu = self._resolve(sc)
        names = sc.params.get("models", ["alexnet", "resnet50", "googlenet"])
        mac_source = sc.params.get("mac_source", "implied")
        lat = self._mac_latencies(sc)
        implied = implied_mac_counts(self.reference, gpu.peak_flops)
        rows: list[ReportRow] = []
        ref = self.reference
        for name in names:
            if mac_source == "implied":
                if name not in implied:
                    raise ConfigError(f"no implied MAC count for model {name!r}")
                macs: float = implied[name]
                tol_pim = self._pim_tol(sc, 32, 0.02)
                tol_gpu = 0.01
            elif mac_source == "counted":
                macs = workloads.model_macs(workloads.load_bundled(
                    name,
                    include_aux=bool(sc.params.get("include_aux", False)),
                    published_kernels=bool(sc.params.get("published_kernels", False))))
                tol_pim = tol_gpu = 0.15
            else:
                raise ConfigError(f"unknown mac_source {mac_source!r}")
            rows.append(ReportRow(sc.name, "model", name, "macs", float(macs)))
            for arch in pims:
                perf = workloads.cnn_perf(arch, macs, lat)
                for metric, val in (("throughput", perf.throughput),
                                    ("energy_eff", perf.energy_efficiency)):
                    rows.append(ReportRow(sc.name, arch.name, name, metric, val,
                                          ref.get("fig6", arch.name, name, metric),
                                          tolerance=tol_pim))
            peak = workloads.cnn_gpu_peak(gpu, macs)
            for metric, val in (("throughput", peak.throughput),
                                ("energy_eff", peak.energy_efficiency)):
                rows.append(ReportRow(sc.name, "gpu_peak", name, metric, val,
                                      ref.get("fig6", "gpu_peak", name, metric),
                                      tolerance=tol_gpu))
        return rows


def violations(rows: list[ReportRow]) -> list[ReportRow]:
    return [r for r in rows if r.ok is False]
