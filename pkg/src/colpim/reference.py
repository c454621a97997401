"""Shipped golden dataset: plotted values of the four reference figures.

The experimental-GPU series is measurement data and is only ever compared
against, never recomputed. Loading verifies a sha256 over the data lines so a
silently edited file is rejected.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import ReferenceDataError

DEFAULT_PATH = Path(__file__).parent / "data" / "reference_figures.csv"

FIGURES = ("fig3", "fig4", "fig5", "fig6")
SERIES = ("memristive", "dram", "gpu_experimental", "gpu_peak")
METRICS = ("throughput", "energy_eff", "ratio", "cc")


@dataclass(frozen=True)
class ReferenceRecord:
    figure: str
    series: str
    label: str
    metric: str
    value: float


class ReferenceData:
    def __init__(self, records: list[ReferenceRecord]):
        self.records = records
        self._index = {(r.figure, r.series, r.label, r.metric): r.value
                       for r in records}

    def get(self, figure: str, series: str, label: str, metric: str) -> float | None:
        return self._index.get((figure, series, label, metric))

    def lookup(self, figure: str, series: str, label: str, metric: str) -> float:
        v = self.get(figure, series, label, metric)
        if v is None:
            raise ReferenceDataError(
                f"no reference record ({figure}, {series}, {label}, {metric})")
        return v

    def labels(self, figure: str) -> list[str]:
        seen = []
        for r in self.records:
            if r.figure == figure and r.label not in seen:
                seen.append(r.label)
        return seen


def load_reference(path: str | Path = DEFAULT_PATH) -> ReferenceData:
    with open(path) as fh:
        raw = fh.read()
    lines = raw.splitlines()
    if not lines or not lines[-1].startswith("# sha256="):
        raise ReferenceDataError("reference file missing checksum line")
    stated = lines[-1].split("=", 1)[1].strip()
    body = "\n".join(lines[:-1]) + "\n"
    actual = hashlib.sha256(body.encode()).hexdigest()
    if actual != stated:
        raise ReferenceDataError(
            f"reference data checksum mismatch (file says {stated[:12]}..., "
            f"content is {actual[:12]}...)")
    header, *data = lines[:-1]
    if header.split(",") != ["figure", "series", "label", "metric", "value"]:
        raise ReferenceDataError(f"unexpected reference header {header!r}")
    records = []
    for ln in data:
        fig, series, label, metric, value = ln.split(",")
        if fig not in FIGURES or series not in SERIES or metric not in METRICS:
            raise ReferenceDataError(f"malformed reference record {ln!r}")
        records.append(ReferenceRecord(fig, series, label, metric, float(value)))
    return ReferenceData(records)


def implied_mac_counts(ref: ReferenceData, peak_flops: float) -> dict[str, float]:
    """MAC counts that make the peak-GPU model reproduce the fig6 bars."""
    out = {}
    for label in ref.labels("fig6"):
        tput = ref.lookup("fig6", "gpu_peak", label, "throughput")
        out[label] = peak_flops / (2.0 * tput)
    return out
