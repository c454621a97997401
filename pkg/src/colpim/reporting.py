"""Report emission: CSV, JSON, and standalone SVG charts.

Outputs are deterministic: stable column and key order, no timestamps unless
requested. SVG charts are self-contained (no scripts, values embedded as
text) with a log-scale value axis: grouped bars for figure-style comparisons
and a scatter with 1/x guide curves for the compute-complexity law.
"""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from pathlib import Path

from .bench import ReportRow

CSV_COLUMNS = ["scenario", "architecture", "label", "metric", "computed",
               "reference", "rel_err", "tolerance", "ok"]
JSON_SCHEMA = "colpim-rows/1"


def _row_dict(r: ReportRow) -> dict:
    return {
        "scenario": r.scenario, "architecture": r.architecture, "label": r.label,
        "metric": r.metric, "computed": r.computed, "reference": r.reference,
        "rel_err": r.rel_err, "tolerance": r.tolerance, "ok": r.ok,
    }


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = _row_dict(r)
        w.writerow([
            d["scenario"], d["architecture"], d["label"], d["metric"],
            f"{d['computed']:.9e}",
            "" if d["reference"] is None else f"{d['reference']:.9e}",
            "" if d["rel_err"] is None else f"{d['rel_err']:.6e}",
            "" if d["tolerance"] is None else f"{d['tolerance']:.4f}",
            "" if d["ok"] is None else str(d["ok"]).lower(),
        ])
    return buf.getvalue()


def csv_to_rows(text: str) -> list[ReportRow]:
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for d in reader:
        rows.append(ReportRow(
            scenario=d["scenario"], architecture=d["architecture"],
            label=d["label"], metric=d["metric"], computed=float(d["computed"]),
            reference=float(d["reference"]) if d["reference"] else None,
            rel_err=float(d["rel_err"]) if d["rel_err"] else None,
            tolerance=float(d["tolerance"]) if d["tolerance"] else None,
        ))
    return rows


def rows_to_json(rows: list[ReportRow], deterministic: bool = False) -> str:
    doc = {"schema": JSON_SCHEMA, "rows": [_row_dict(r) for r in rows]}
    if not deterministic:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def json_to_rows(text: str) -> list[ReportRow]:
    doc = json.loads(text)
    if doc.get("schema") != JSON_SCHEMA:
        raise ValueError(f"unsupported rows schema {doc.get('schema')!r}")
    return [ReportRow(scenario=d["scenario"], architecture=d["architecture"],
                      label=d["label"], metric=d["metric"], computed=d["computed"],
                      reference=d.get("reference"), rel_err=d.get("rel_err"),
                      tolerance=d.get("tolerance"))
            for d in doc["rows"]]


# -- SVG ------------------------------------------------------------------------

_COLORS = ["#4472c4", "#ed7d31", "#a5a5a5", "#70ad47", "#9e480e", "#636363"]


def _log_y(v: float, vmin: float, vmax: float, top: float, bottom: float) -> float:
    t = (math.log10(v) - math.log10(vmin)) / (math.log10(vmax) - math.log10(vmin))
    return bottom - t * (bottom - top)


def grouped_bar_svg(rows: list[ReportRow], metric: str, title: str) -> str:
    """Log-scale grouped bars: one group per label, one bar per architecture."""
    sel = [r for r in rows if r.metric == metric and r.computed > 0]
    if not sel:
        raise ValueError(f"no rows with metric {metric!r}")
    labels = list(dict.fromkeys(r.label for r in sel))
    series = list(dict.fromkeys(r.architecture for r in sel))
    vals = {(r.architecture, r.label): r.computed for r in sel}
    vmin = min(v for v in vals.values()) / 10
    vmax = max(v for v in vals.values()) * 10
    width, height = 640, 360
    left, right, top, bottom = 70, 20, 40, 300
    gw = (width - left - right) / len(labels)
    bw = gw / (len(series) + 1)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<text x="{width/2:.1f}" y="20" text-anchor="middle" '
           f'font-family="sans-serif" font-size="14">{title}</text>']
    dec_lo = math.floor(math.log10(vmin))
    dec_hi = math.ceil(math.log10(vmax))
    for d in range(dec_lo, dec_hi + 1, max(1, (dec_hi - dec_lo) // 8)):
        y = _log_y(10.0 ** d, vmin, vmax, top, bottom)
        out.append(f'<line x1="{left}" y1="{y:.1f}" x2="{width-right}" y2="{y:.1f}" '
                   f'stroke="#dddddd"/>')
        out.append(f'<text x="{left-6}" y="{y+4:.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="9">1e{d}</text>')
    for li, label in enumerate(labels):
        gx = left + li * gw
        out.append(f'<text x="{gx + gw/2:.1f}" y="{bottom+16}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="10">{label}</text>')
        for si, s in enumerate(series):
            v = vals.get((s, label))
            if v is None:
                continue
            x = gx + (si + 0.5) * bw
            y = _log_y(v, vmin, vmax, top, bottom)
            color = _COLORS[si % len(_COLORS)]
            out.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{bw*0.9:.1f}" '
                       f'height="{bottom-y:.1f}" fill="{color}" data-series="{s}" '
                       f'data-label="{label}" data-value="{v:.6e}"/>')
            out.append(f'<text x="{x + bw*0.45:.1f}" y="{y-2:.1f}" text-anchor="middle" '
                       f'font-family="sans-serif" font-size="6">{v:.2e}</text>')
    for si, s in enumerate(series):
        color = _COLORS[si % len(_COLORS)]
        x = left + si * 130
        out.append(f'<rect x="{x}" y="{height-22}" width="10" height="10" fill="{color}"/>')
        out.append(f'<text x="{x+14}" y="{height-13}" font-family="sans-serif" '
                   f'font-size="10">{s}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def inverse_law_svg(rows: list[ReportRow], title: str) -> str:
    """Scatter of (cc, ratio) per architecture with the 1/cc guide curve."""
    ccs = {(r.architecture, r.label): r.computed for r in rows if r.metric == "cc"}
    ratios = {(r.architecture, r.label): r.computed for r in rows if r.metric == "ratio"}
    keys = [k for k in ccs if k in ratios]
    if not keys:
        raise ValueError("no (cc, ratio) pairs in rows")
    series = list(dict.fromkeys(k[0] for k in keys))
    xs = [ccs[k] for k in keys]
    ys = [ratios[k] for k in keys]
    xmin, xmax = min(xs) / 1.5, max(xs) * 1.5
    ymin, ymax = min(ys) / 3, max(ys) * 3
    width, height = 560, 420
    left, right, top, bottom = 70, 20, 40, 360

    def px(x):
        t = (math.log10(x) - math.log10(xmin)) / (math.log10(xmax) - math.log10(xmin))
        return left + t * (width - left - right)

    def py(y):
        return _log_y(y, ymin, ymax, top, bottom)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<text x="{width/2:.1f}" y="20" text-anchor="middle" '
           f'font-family="sans-serif" font-size="14">{title}</text>',
           f'<line x1="{left}" y1="{bottom}" x2="{width-right}" y2="{bottom}" stroke="#333"/>',
           f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="#333"/>']
    for si, s in enumerate(series):
        color = _COLORS[si % len(_COLORS)]
        pts = [(ccs[k], ratios[k], k[1]) for k in keys if k[0] == s]
        pts.sort()
        # 1/x guide anchored at the lowest-cc point
        x0, y0, _ = pts[0]
        path = []
        steps = 64
        for i in range(steps + 1):
            x = xmin * (xmax / xmin) ** (i / steps)
            y = y0 * x0 / x
            if ymin <= y <= ymax:
                path.append(f"{px(x):.1f},{py(y):.1f}")
        out.append(f'<polyline fill="none" stroke="{color}" stroke-dasharray="4 3" '
                   f'points="{" ".join(path)}"/>')
        for x, y, label in pts:
            out.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="4" fill="{color}" '
                       f'data-series="{s}" data-label="{label}" data-cc="{x:.6g}" '
                       f'data-ratio="{y:.6e}"/>')
            out.append(f'<text x="{px(x)+6:.1f}" y="{py(y)-4:.1f}" '
                       f'font-family="sans-serif" font-size="8">{label}</text>')
        out.append(f'<rect x="{left + si*130}" y="{height-16}" width="10" height="10" '
                   f'fill="{color}"/>')
        out.append(f'<text x="{left + si*130 + 14}" y="{height-7}" '
                   f'font-family="sans-serif" font-size="10">{s}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_outputs(rows: list[ReportRow], out_dir: str | Path, formats,
                  basename: str, deterministic: bool = False) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        p = out_dir / f"{basename}.csv"
        p.write_text(rows_to_csv(rows))
        written.append(p)
    if "json" in formats:
        p = out_dir / f"{basename}.json"
        p.write_text(rows_to_json(rows, deterministic=deterministic))
        written.append(p)
    if "svg" in formats:
        has_ratio = any(r.metric == "ratio" for r in rows)
        if has_ratio:
            p = out_dir / f"{basename}-inverse-law.svg"
            p.write_text(inverse_law_svg(rows, f"{basename}: improvement vs compute complexity"))
            written.append(p)
        for metric in ("throughput", "energy_eff"):
            if any(r.metric == metric and r.computed > 0 for r in rows):
                p = out_dir / f"{basename}-{metric}.svg"
                p.write_text(grouped_bar_svg(rows, metric, f"{basename}: {metric}"))
                written.append(p)
    return written
