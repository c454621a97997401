"""Operand number formats and their row encodings.

A row holds one operand as its standard bit pattern (two's complement for
fixed point, IEEE-754 interchange format for floating point), laid out
LSB-first across the layout columns unless msb_first is requested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EncodingError

_FIXED_WIDTHS = (8, 16, 32)
_FLOAT_SPLITS = {16: (5, 10), 32: (8, 23)}
_FLOAT_DTYPES = {16: np.float16, 32: np.float32}
_UINT_DTYPES = {8: np.uint8, 16: np.uint16, 32: np.uint32}
_INT_DTYPES = {8: np.int8, 16: np.int16, 32: np.int32}


@dataclass(frozen=True)
class NumberFormat:
    kind: str                 # "fixed" | "float"
    total_bits: int
    signed: bool = True       # fixed only
    exponent_bits: int = 0    # float only
    mantissa_bits: int = 0    # float only

    def __post_init__(self):
        if self.kind == "fixed":
            if self.total_bits not in _FIXED_WIDTHS:
                raise EncodingError(f"unsupported fixed width {self.total_bits}")
        elif self.kind == "float":
            split = _FLOAT_SPLITS.get(self.total_bits)
            if split != (self.exponent_bits, self.mantissa_bits):
                raise EncodingError(
                    f"unsupported float split ({self.exponent_bits},{self.mantissa_bits})"
                    f" for {self.total_bits} bits")
        else:
            raise EncodingError(f"unknown format kind {self.kind!r}")

    @property
    def name(self) -> str:
        if self.kind == "fixed":
            return f"{'' if self.signed else 'u'}fixed{self.total_bits}"
        return f"fp{self.total_bits}"

    # -- pattern <-> value ------------------------------------------------

    def encode(self, values) -> np.ndarray:
        """Values -> uint64 bit patterns. Raises EncodingError when out of range."""
        n = self.total_bits
        if self.kind == "fixed":
            vals = np.asarray(values, dtype=np.int64)
            if self.signed:
                lo, hi = -(1 << (n - 1)), (1 << (n - 1)) - 1
            else:
                lo, hi = 0, (1 << n) - 1
            if vals.size and (vals.min() < lo or vals.max() > hi):
                bad = vals[(vals < lo) | (vals > hi)][0]
                raise EncodingError(f"value {bad} not representable in {self.name}")
            return (vals.astype(np.uint64)) & np.uint64((1 << n) - 1)
        f = np.asarray(values, dtype=_FLOAT_DTYPES[n])
        return f.view(_UINT_DTYPES[n]).astype(np.uint64)

    def decode(self, patterns) -> np.ndarray:
        """Inverse of encode; every bit pattern decodes (NaN patterns -> NaN)."""
        n = self.total_bits
        pats = np.asarray(patterns, dtype=np.uint64) & np.uint64((1 << n) - 1)
        if self.kind == "fixed":
            if self.signed:
                return pats.astype(_UINT_DTYPES[n]).view(_INT_DTYPES[n]).astype(np.int64)
            return pats.astype(np.int64)
        return pats.astype(_UINT_DTYPES[n]).view(_FLOAT_DTYPES[n])


def fixed(bits: int, signed: bool = True) -> NumberFormat:
    return NumberFormat("fixed", bits, signed=signed)


def half() -> NumberFormat:
    return NumberFormat("float", 16, exponent_bits=5, mantissa_bits=10)


def single() -> NumberFormat:
    return NumberFormat("float", 32, exponent_bits=8, mantissa_bits=23)


_BY_NAME = {
    "fixed8": fixed(8), "fixed16": fixed(16), "fixed32": fixed(32),
    "ufixed8": fixed(8, signed=False), "ufixed16": fixed(16, signed=False),
    "ufixed32": fixed(32, signed=False),
    "fp16": half(), "fp32": single(),
    "half": half(), "single": single(),
}


def by_name(name: str) -> NumberFormat:
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        raise EncodingError(f"unknown format name {name!r}") from None


def load_operands(grid, values, fmt: NumberFormat, columns, msb_first: bool = False) -> None:
    """Write values into grid rows over the given layout columns.

    Row i receives the encoding of values[i]; rows beyond len(values) keep
    their previous contents.
    """
    columns = list(columns)
    if len(columns) != fmt.total_bits:
        raise EncodingError(
            f"layout width {len(columns)} != format width {fmt.total_bits}")
    vals = np.asarray(values)
    if vals.ndim != 1:
        vals = vals.reshape(-1)
    if len(vals) > grid.rows:
        raise EncodingError(f"{len(vals)} values exceed {grid.rows} grid rows")
    pats = fmt.encode(vals)
    order = range(fmt.total_bits)
    n = len(vals)
    keep = np.zeros(grid.rows, dtype=np.uint8)
    for k in order:
        col = columns[fmt.total_bits - 1 - k] if msb_first else columns[k]
        bits = ((pats >> np.uint64(k)) & np.uint64(1)).astype(np.uint8)
        if n < grid.rows:
            keep[:n] = bits
            keep[n:] = grid.column(col)[n:]
            grid.set_column(col, keep)
        else:
            grid.set_column(col, bits)


def read_results(grid, fmt: NumberFormat, columns, count: int | None = None,
                 msb_first: bool = False) -> np.ndarray:
    """Decode the first `count` rows (default: all) over the layout columns."""
    columns = list(columns)
    if len(columns) != fmt.total_bits:
        raise EncodingError(
            f"layout width {len(columns)} != format width {fmt.total_bits}")
    n = grid.rows if count is None else count
    pats = np.zeros(n, dtype=np.uint64)
    for k in range(fmt.total_bits):
        col = columns[fmt.total_bits - 1 - k] if msb_first else columns[k]
        bits = grid.column(col)[:n].astype(np.uint64)
        pats |= bits << np.uint64(k)
    return fmt.decode(pats)
