"""Binary crossbar grid executing one column-wise logic gate per cycle.

The grid is a rows x cols matrix of bits. A gate reads up to three input
columns and writes one output column, affecting every row simultaneously;
each applied gate (including INIT0/INIT1) is charged one cycle.

Rows are bit-packed into 64-bit words, one word run per column, so a column
operation is a handful of word-wise boolean ops. Programs are executed either
by the compiled core (colpim._gridcore, built from Cython) or by a pure-numpy
fallback; the backend is chosen at import and can be overridden with
set_backend() or the COLPIM_BACKEND environment variable.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np

from . import _fallback
from .errors import InvalidOperationError

try:
    from . import _gridcore
except ImportError:  # compiled core is optional
    _gridcore = None

_FORCED = os.environ.get("COLPIM_BACKEND", "").strip().lower()
_active_backend = "python" if (_FORCED == "python" or _gridcore is None) else "compiled"


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _gridcore is not None else ("python",)


def active_backend() -> str:
    return _active_backend


def set_backend(name: str) -> None:
    """Select the program-execution backend ("compiled" or "python")."""
    global _active_backend
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    _active_backend = name


class Gate(IntEnum):
    INIT0 = 0
    INIT1 = 1
    NOT = 2
    NOR2 = 3
    NOR3 = 4
    AND2 = 5
    OR2 = 6

    @property
    def arity(self) -> int:
        return _ARITY[self]


_ARITY = {Gate.INIT0: 0, Gate.INIT1: 0, Gate.NOT: 1, Gate.NOR2: 2, Gate.NOR3: 3,
          Gate.AND2: 2, Gate.OR2: 2}

#: Gates permitted in programs that model memristive stateful logic.
MEMRISTIVE_GATES = frozenset({Gate.INIT0, Gate.INIT1, Gate.NOT, Gate.NOR2, Gate.NOR3})


@dataclass(frozen=True)
class ColumnOp:
    """One column-wise gate: output column gets gate(input columns), all rows at once."""

    gate: Gate
    inputs: tuple[int, ...]
    output: int

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(i) for i in self.inputs))
        object.__setattr__(self, "output", int(self.output))
        if len(self.inputs) != self.gate.arity:
            raise InvalidOperationError(
                f"{self.gate.name} takes {self.gate.arity} inputs, got {len(self.inputs)}")
        if self.output in self.inputs:
            raise InvalidOperationError(
                f"output column {self.output} aliases an input column")
        if self.output < 0 or any(i < 0 for i in self.inputs):
            raise InvalidOperationError("column indices must be non-negative")

    def check_width(self, cols: int) -> None:
        if self.output >= cols or any(i >= cols for i in self.inputs):
            raise InvalidOperationError(
                f"op {self.gate.name} {self.inputs}->{self.output} exceeds {cols} columns")


@dataclass
class ExecutionStats:
    """Cycle accounting for executed column operations."""

    cycles: int = 0
    gates_applied: int = 0
    per_gate_histogram: Counter = field(default_factory=Counter)

    def add(self, other: "ExecutionStats") -> "ExecutionStats":
        self.cycles += other.cycles
        self.gates_applied += other.gates_applied
        self.per_gate_histogram.update(other.per_gate_histogram)
        return self


def compile_ops(ops: Sequence[ColumnOp]):
    """Flatten ops into the int arrays consumed by the execution backends."""
    n = len(ops)
    gates = np.zeros(n, dtype=np.int32)
    ins = np.full((n, 3), -1, dtype=np.int32)
    outs = np.zeros(n, dtype=np.int32)
    for k, op in enumerate(ops):
        gates[k] = int(op.gate)
        for j, i in enumerate(op.inputs):
            ins[k, j] = i
        outs[k] = op.output
    return gates, ins, outs


def stats_for(ops: Sequence[ColumnOp]) -> ExecutionStats:
    hist = Counter(op.gate for op in ops)
    return ExecutionStats(cycles=len(ops), gates_applied=len(ops), per_gate_histogram=hist)


class Grid:
    """One crossbar: a rows x cols bit matrix mutated by column operations."""

    def __init__(self, rows: int, cols: int, fill: int = 0):
        if rows < 1 or cols < 1:
            raise InvalidOperationError(f"grid dimensions must be >= 1, got {rows}x{cols}")
        if fill not in (0, 1):
            raise InvalidOperationError(f"fill must be 0 or 1, got {fill}")
        self.rows = int(rows)
        self.cols = int(cols)
        self.nwords = (self.rows + 63) // 64
        word = np.uint64(0xFFFFFFFFFFFFFFFF) if fill else np.uint64(0)
        self.words = np.full((self.cols, self.nwords), word, dtype=np.uint64)
        self.stats = ExecutionStats()

    # -- bit access -------------------------------------------------------

    def column(self, col: int) -> np.ndarray:
        """Column bits as a uint8 vector of length rows."""
        raw = np.unpackbits(self.words[col].view(np.uint8), bitorder="little")
        return raw[: self.rows]

    def set_column(self, col: int, bits: np.ndarray) -> None:
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape != (self.rows,):
            raise ValueError(f"expected {self.rows} bits, got shape {bits.shape}")
        padded = np.zeros(self.nwords * 64, dtype=np.uint8)
        padded[: self.rows] = bits
        self.words[col] = np.packbits(padded, bitorder="little").view(np.uint64)

    @property
    def cells(self) -> np.ndarray:
        """Dense rows x cols uint8 snapshot (copies; for inspection and tests)."""
        out = np.empty((self.rows, self.cols), dtype=np.uint8)
        for c in range(self.cols):
            out[:, c] = self.column(c)
        return out

    # -- execution --------------------------------------------------------

    def apply(self, op: ColumnOp) -> ExecutionStats:
        """Apply one column op (one cycle); returns the single-op stats delta."""
        op.check_width(self.cols)
        _fallback.run_ops(self.words, *compile_ops([op]))
        delta = stats_for([op])
        self.stats.add(delta)
        return delta

    def run(self, ops: Sequence[ColumnOp] | "ProgramLike") -> ExecutionStats:
        """Execute a straight-line op sequence on the active backend.

        The first invalid op aborts with its error; ops before it are applied.
        Op validity is data-independent, so the abort point is found up front
        and the valid prefix runs on the fast path.
        """
        seq, compiled = _as_ops(ops)
        bad = None
        for k, op in enumerate(seq):
            try:
                op.check_width(self.cols)
            except InvalidOperationError as exc:
                bad, err = k, exc
                break
        if bad is not None:
            prefix = list(seq[:bad])
            self._execute(compile_ops(prefix))
            self.stats.add(stats_for(prefix))
            raise err
        self._execute(compiled if compiled is not None else compile_ops(seq))
        delta = stats_for(seq)
        self.stats.add(delta)
        return delta

    def _execute(self, compiled) -> None:
        gates, ins, outs = compiled
        if _active_backend == "compiled":
            _gridcore.run_ops(self.words, gates, ins, outs)
        else:
            _fallback.run_ops(self.words, gates, ins, outs)


def _as_ops(ops):
    """Accept a raw op sequence or anything exposing .ops / .compiled()."""
    if hasattr(ops, "ops"):
        compiled = ops.compiled() if hasattr(ops, "compiled") else None
        return ops.ops, compiled
    return list(ops), None


def new_grid(rows: int, cols: int, fill: int = 0) -> Grid:
    return Grid(rows, cols, fill)
