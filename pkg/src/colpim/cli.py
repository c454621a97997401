"""Command-line benchmark runner.

Subcommands:
  verify       gate-level kernel verification against the host oracle
  bench        run a scenario and compare against the reference dataset
  report       re-emit saved rows as CSV/JSON/SVG
  list-archs   show configured architectures
  list-models  show bundled CNN layer files

Exit codes: 0 all comparisons within tolerance, 1 tolerance violation or
verification mismatch, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import reporting, workloads
from .archmodel import derive
from .bench import Bench, Config, DEFAULT_CONFIG, Scenario, violations
from .errors import ColpimError
from .formats import by_name
from .kernels import build_kernel, measure, verify_kernel
from .reference import DEFAULT_PATH as DEFAULT_REFERENCE
from .reference import load_reference

VERIFY_FORMATS = ("fixed8", "fixed16", "fixed32", "fp16", "fp32")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=DEFAULT_CONFIG,
                   help="configuration JSON (architectures, scenarios, latencies)")
    p.add_argument("--reference", type=Path, default=DEFAULT_REFERENCE,
                   help="reference dataset CSV")
    p.add_argument("--latency-mode", choices=("calibrated", "measured"),
                   default="calibrated")
    p.add_argument("--eta", type=float, default=None,
                   help="override GPU bandwidth efficiency fraction")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--format", dest="formats", action="append",
                   choices=("csv", "json", "svg"),
                   help="output format (repeatable; default csv+json)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for random verification sampling")
    p.add_argument("--deterministic-output", action="store_true",
                   help="omit timestamps so outputs are byte-identical")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="colpim", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="verify arithmetic kernels bit-exactly")
    pv.add_argument("--format", dest="fmt_names", action="append",
                    metavar="FMT", help=f"one of {VERIFY_FORMATS} (repeatable)")
    pv.add_argument("--samples", type=int, default=100_000)
    pv.add_argument("--exhaustive", action="store_true",
                    help="run every operand pair (use with 8-bit formats)")
    pv.add_argument("--seed", type=int, default=0)

    pb = sub.add_parser("bench", help="run an analytical benchmark scenario")
    pb.add_argument("--scenario", action="append", dest="scenarios",
                    help="scenario name from the config (repeatable; default all)")
    _add_common(pb)

    pr = sub.add_parser("report", help="re-emit saved benchmark rows")
    pr.add_argument("--input", type=Path, required=True,
                    help="rows file from a previous bench run (.json or .csv)")
    _add_common(pr)

    pl = sub.add_parser("list-archs", help="show configured architectures")
    pl.add_argument("--config", type=Path, default=DEFAULT_CONFIG)

    pm = sub.add_parser("list-models", help="show bundled CNN models")
    return ap


def cmd_verify(args) -> int:
    names = args.fmt_names or list(VERIFY_FORMATS)
    failures = 0
    for name in names:
        if name not in VERIFY_FORMATS:
            print(f"error: unknown format {name!r} (choose from {VERIFY_FORMATS})",
                  file=sys.stderr)
            return 2
        fmt = by_name(name)
        for op in ("add", "mult"):
            prog = build_kernel(op, fmt)
            rep = measure(prog)
            res = verify_kernel(prog, samples=args.samples,
                                exhaustive=args.exhaustive, seed=args.seed)
            state = "ok" if res.passed else "MISMATCH"
            print(f"{prog.name}: {res.cases - res.mismatch_count}/{res.cases} "
                  f"match, latency={rep.latency_cycles} cc={float(rep.cc):.4g} "
                  f"[{state}]")
            for m in res.first_mismatches[:3]:
                print(f"  {m.describe(fmt.total_bits)}")
            failures += 0 if res.passed else 1
    return 0 if failures == 0 else 1


def cmd_bench(args) -> int:
    config = Config.load(args.config)
    reference = load_reference(args.reference)
    bench = Bench(config, reference)
    names = args.scenarios or list(config.scenarios)
    rows = []
    for name in names:
        if name not in config.scenarios:
            print(f"error: unknown scenario {name!r} "
                  f"(have {sorted(config.scenarios)})", file=sys.stderr)
            return 2
        sc = Scenario.from_config(name, config.scenarios[name],
                                  args.latency_mode, args.eta)
        rows.extend(bench.run(sc))
    _print_rows(rows)
    if args.out:
        formats = args.formats or ["csv", "json"]
        written = reporting.write_outputs(rows, args.out, formats,
                                          basename="-".join(names) or "bench",
                                          deterministic=args.deterministic_output)
        for p in written:
            print(f"wrote {p}")
    bad = violations(rows)
    if bad:
        print(f"{len(bad)} comparison(s) outside tolerance:")
        for r in bad[:10]:
            print(f"  {r.scenario}/{r.architecture}/{r.label}/{r.metric}: "
                  f"computed {r.computed:.4e} vs {r.reference:.4e} "
                  f"({r.rel_err:.2%} > {r.tolerance:.0%})")
        return 1
    return 0


def cmd_report(args) -> int:
    text = args.input.read_text()
    if args.input.suffix == ".json":
        rows = reporting.json_to_rows(text)
    elif args.input.suffix == ".csv":
        rows = reporting.csv_to_rows(text)
    else:
        print("error: --input must be a .json or .csv rows file", file=sys.stderr)
        return 2
    if not rows:
        print("error: empty rows file", file=sys.stderr)
        return 2
    out = args.out or Path(".")
    formats = args.formats or ["csv", "json"]
    written = reporting.write_outputs(rows, out, formats,
                                      basename=args.input.stem,
                                      deterministic=args.deterministic_output)
    for p in written:
        print(f"wrote {p}")
    return 0


def cmd_list_archs(args) -> int:
    config = Config.load(args.config)
    for name, arch in config.pims.items():
        d = derive(arch)
        print(f"{name}: {arch.crossbar_rows}x{arch.crossbar_cols} crossbars x "
              f"{d.num_crossbars} = {d.total_rows:,} rows, "
              f"{arch.clock/1e6:g} MHz, {arch.gate_energy*1e15:g} fJ/gate, "
              f"max power {d.max_power:.1f} W")
    for name, gpu in config.gpus.items():
        print(f"{name} (gpu): {gpu.cores} cores, {gpu.bandwidth/1e9:g} GB/s, "
              f"peak {gpu.peak_flops:.3g} OPS, {gpu.max_power:g} W, "
              f"eta={gpu.bandwidth_efficiency}")
    return 0


def cmd_list_models(_args) -> int:
    for name, path in workloads.bundled_models().items():
        model = workloads.load_model(path)
        macs = workloads.model_macs(model)
        print(f"{name}: {len(model.layers)} counted layers, {macs:,} MACs "
              f"({macs:.3e})")
    return 0


def _print_rows(rows) -> None:
    print(f"{'scenario':<12} {'series':<12} {'label':<12} {'metric':<11} "
          f"{'computed':>12} {'reference':>12} {'rel err':>9}")
    for r in rows:
        ref = f"{r.reference:.4e}" if r.reference is not None else "-"
        err = f"{r.rel_err:.3%}" if r.rel_err is not None else "-"
        mark = "" if r.ok is None else (" ok" if r.ok else " VIOLATION")
        print(f"{r.scenario:<12} {r.architecture:<12} {r.label:<12} "
              f"{r.metric:<11} {r.computed:>12.4e} {ref:>12} {err:>9}{mark}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"verify": cmd_verify, "bench": cmd_bench, "report": cmd_report,
                "list-archs": cmd_list_archs, "list-models": cmd_list_models}
    try:
        return handlers[args.command](args)
    except ColpimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
