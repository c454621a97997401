"""Column programs: straight-line kernels plus measurement and verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import InvalidOperationError
from ..formats import NumberFormat, load_operands, read_results
from ..grid import ColumnOp, Grid, MEMRISTIVE_GATES, compile_ops


@dataclass
class ColumnProgram:
    """An oblivious gate sequence computing z = u (op) v, one element per row."""

    name: str
    kind: str                      # "add" | "mult"
    format: NumberFormat
    ops: list[ColumnOp]
    u_cols: list[int]
    v_cols: list[int]
    z_cols: list[int]
    width: int                     # total columns including scratch
    profile: str = "memristive"
    _compiled: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if set(self.z_cols) & (set(self.u_cols) | set(self.v_cols)):
            raise InvalidOperationError("output layout overlaps input layout")
        if self.profile == "memristive":
            bad = {op.gate for op in self.ops} - MEMRISTIVE_GATES
            if bad:
                raise InvalidOperationError(
                    f"gates {sorted(g.name for g in bad)} outside memristive profile")

    @property
    def latency_cycles(self) -> int:
        return len(self.ops)

    def compiled(self):
        if self._compiled is None:
            self._compiled = compile_ops(self.ops)
        return self._compiled

    def scratch_cols(self) -> list[int]:
        used = set(self.u_cols) | set(self.v_cols) | set(self.z_cols)
        return [c for c in range(self.width) if c not in used]


@dataclass
class KernelReport:
    """Latency and compute-complexity summary for one kernel."""

    latency_cycles: int
    io_bits: int
    cc: Fraction
    verified: bool = False
    samples: int = 0


@dataclass
class Mismatch:
    row: int
    u: int
    v: int
    got: int
    expected: int

    def describe(self, n_bits: int) -> str:
        w = (n_bits + 3) // 4
        return (f"row {self.row}: u=0x{self.u:0{w}x} v=0x{self.v:0{w}x} "
                f"got=0x{self.got:0{w}x} expected=0x{self.expected:0{w}x}")


@dataclass
class VerificationReport:
    kernel: str
    cases: int
    mismatch_count: int
    first_mismatches: list[Mismatch]
    passed: bool

    def summary(self) -> str:
        state = "pass" if self.passed else "FAIL"
        msg = f"{self.kernel}: {self.cases - self.mismatch_count}/{self.cases} match [{state}]"
        if self.first_mismatches:
            msg += "\n  " + "\n  ".join(m.describe(32) for m in self.first_mismatches[:5])
        return msg


def measure(program: ColumnProgram) -> KernelReport:
    io_bits = 3 * program.format.total_bits
    return KernelReport(
        latency_cycles=program.latency_cycles,
        io_bits=io_bits,
        cc=Fraction(program.latency_cycles, io_bits),
    )


def host_oracle(kind: str, fmt: NumberFormat, u_pats: np.ndarray, v_pats: np.ndarray) -> np.ndarray:
    """Reference result bit patterns computed with host arithmetic.

    Fixed point wraps modulo 2^N (identical for signed and unsigned
    interpretations); floating point uses the host IEEE-754 unit, which
    rounds to nearest-even.
    """
    n = fmt.total_bits
    mask = np.uint64((1 << n) - 1)
    if fmt.kind == "fixed":
        if kind == "add":
            return (u_pats + v_pats) & mask
        if kind == "mult":
            return (u_pats * v_pats) & mask
        raise ValueError(f"unknown kernel kind {kind!r}")
    uf = fmt.decode(u_pats)
    vf = fmt.decode(v_pats)
    with np.errstate(all="ignore"):
        if kind == "add":
            zf = uf + vf
        elif kind == "mult":
            zf = uf * vf
        else:
            raise ValueError(f"unknown kernel kind {kind!r}")
    return fmt.encode(zf)


def _pattern_space(n_bits: int) -> int:
    return 1 << n_bits


def sample_patterns(fmt: NumberFormat, samples: int, rng: np.random.Generator):
    space = _pattern_space(fmt.total_bits)
    u = rng.integers(0, space, size=samples, dtype=np.uint64)
    v = rng.integers(0, space, size=samples, dtype=np.uint64)
    return u, v


def exhaustive_patterns(fmt: NumberFormat):
    space = _pattern_space(fmt.total_bits)
    u = np.repeat(np.arange(space, dtype=np.uint64), space)
    v = np.tile(np.arange(space, dtype=np.uint64), space)
    return u, v


def run_cases(program: ColumnProgram, u_pats: np.ndarray, v_pats: np.ndarray) -> np.ndarray:
    """Execute the program on one grid holding all cases, one per row."""
    fmt = program.format
    grid = Grid(len(u_pats), program.width)
    load_operands(grid, fmt.decode(u_pats), fmt, program.u_cols)
    load_operands(grid, fmt.decode(v_pats), fmt, program.v_cols)
    grid.run(program)
    return fmt.encode(read_results(grid, fmt, program.z_cols))


def verify_kernel(program: ColumnProgram, samples: int | None = None,
                  exhaustive: bool = False, seed: int = 0,
                  batch_rows: int = 1 << 20, extra_pairs=None) -> VerificationReport:
    """Compare kernel outputs against the host oracle.

    Mismatches are reported (with full operand bit patterns), not raised.
    extra_pairs optionally appends directed (u_pattern, v_pattern) cases.
    """
    fmt = program.format
    if exhaustive:
        u, v = exhaustive_patterns(fmt)
    else:
        rng = np.random.default_rng(seed)
        u, v = sample_patterns(fmt, samples or 10_000, rng)
    if extra_pairs is not None and len(extra_pairs):
        eu = np.asarray([p[0] for p in extra_pairs], dtype=np.uint64)
        ev = np.asarray([p[1] for p in extra_pairs], dtype=np.uint64)
        u = np.concatenate([u, eu])
        v = np.concatenate([v, ev])

    mism: list[Mismatch] = []
    total_bad = 0
    for start in range(0, len(u), batch_rows):
        ub, vb = u[start:start + batch_rows], v[start:start + batch_rows]
        got = run_cases(program, ub, vb)
        want = host_oracle(program.kind, fmt, ub, vb)
        equal = got == want
        if fmt.kind == "float":
            got_nan = np.isnan(fmt.decode(got))
            want_nan = np.isnan(fmt.decode(want))
            equal |= got_nan & want_nan      # NaN compared as "is NaN"
        bad = np.nonzero(~equal)[0]
        total_bad += len(bad)
        for idx in bad[: max(0, 10 - len(mism))]:
            mism.append(Mismatch(
                row=int(start + idx), u=int(ub[idx]), v=int(vb[idx]),
                got=int(got[idx]), expected=int(want[idx])))
    return VerificationReport(
        kernel=f"{program.name}",
        cases=len(u),
        mismatch_count=total_bad,
        first_mismatches=mism,
        passed=total_bad == 0,
    )
