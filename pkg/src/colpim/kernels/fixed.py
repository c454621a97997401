"""Bit-serial fixed-point kernels: ripple-carry add and shift-and-add multiply."""

from __future__ import annotations

from ..errors import InvalidOperationError
from ..formats import NumberFormat
from ..grid import Gate
from .builder import Builder
from .program import ColumnProgram


def _check_fixed(fmt: NumberFormat) -> int:
    if fmt.kind != "fixed":
        raise InvalidOperationError(f"fixed kernel needs a fixed format, got {fmt.name}")
    return fmt.total_bits


def build_fixed_add(fmt: NumberFormat) -> ColumnProgram:
    """z = (u + v) mod 2^N, one full adder of 9 serial NOR gates per bit.

    Each bit costs exactly 18 cycles (9 gates, 9 initializations): the slice
    leads with INIT0 of its carry-out column, and the first slice reads that
    just-initialized column as its zero carry-in. Total latency is 18*N, so
    doubling the width exactly doubles the latency.
    """
    n = _check_fixed(fmt)
    u = list(range(n))
    v = list(range(n, 2 * n))
    z = list(range(2 * n, 3 * n))
    b = Builder(3 * n)
    ca, cb = b.alloc(2)
    for i in range(n):
        c_out = ca if i % 2 == 0 else cb
        c_in = c_out if i == 0 else (cb if i % 2 == 0 else ca)
        b.init(c_out, 0)
        b.full_adder9(u[i], v[i], c_in, z[i], c_out, init_cout=False)
    return ColumnProgram(
        name=f"add-{fmt.name}", kind="add", format=fmt, ops=b.ops,
        u_cols=u, v_cols=v, z_cols=z, width=b.width)


def build_fixed_mult(fmt: NumberFormat) -> ColumnProgram:
    """z = (u * v) mod 2^N by serial accumulation of partial products.

    The full 2N-bit product is computed (upper half in scratch); the output
    layout carries the low half, which is the modular product for both
    unsigned and two's-complement operands.
    """
    n = _check_fixed(fmt)
    u = list(range(n))
    v = list(range(n, 2 * n))
    z = list(range(2 * n, 3 * n))
    b = Builder(3 * n)
    upper = b.alloc(n)
    zfull = z + upper

    notu = [b.nor(u[j]) for j in range(n)]
    noty = b.alloc()
    pp = b.alloc()
    carry = b.alloc()
    for i in range(n):
        b.nor(v[i], out=noty)
        if i == 0:
            for j in range(n):
                b.nor(notu[j], noty, out=zfull[j])
            for j in range(n, 2 * n):
                b.init(zfull[j], 0)
            continue
        b.init(carry, 0)
        for j in range(n):
            b.nor(notu[j], noty, out=pp)
            c_out = carry if j < n - 1 else zfull[i + n]
            b.full_adder9(zfull[i + j], pp, carry, zfull[i + j], c_out)
    return ColumnProgram(
        name=f"mult-{fmt.name}", kind="mult", format=fmt, ops=b.ops,
        u_cols=u, v_cols=v, z_cols=z, width=b.width)
