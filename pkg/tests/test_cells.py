"""Exhaustive checks of the builder's gate cells over all input combinations."""

import itertools

import numpy as np
import pytest

from colpim import Grid
from colpim.grid import MEMRISTIVE_GATES
from colpim.kernels.builder import Builder


def run_cell(n_inputs, emit, n_outputs=1):
    """Drive a builder cell with every input combination at once."""
    combos = list(itertools.product((0, 1), repeat=n_inputs))
    b = Builder(n_inputs)
    outs = emit(b, list(range(n_inputs)))
    outs = [outs] if isinstance(outs, int) else list(outs)
    g = Grid(len(combos), b.width)
    for c in range(n_inputs):
        g.set_column(c, np.array([combo[c] for combo in combos], dtype=np.uint8))
    g.run(b.ops)
    return combos, [list(g.column(o)) for o in outs]


class TestCells:
    def test_full_adder9(self):
        def emit(b, ins):
            s, co = b.alloc(2)
            b.full_adder9(ins[0], ins[1], ins[2], s, co)
            return s, co
        combos, (s, co) = run_cell(3, emit)
        for (a, x, c), sv, cv in zip(combos, s, co):
            assert sv == (a + x + c) % 2
            assert cv == (a + x + c) // 2

    def test_full_adder9_gate_count(self):
        b = Builder(3)
        s, co = b.alloc(2)
        b.full_adder9(0, 1, 2, s, co)
        gates = [op for op in b.ops if op.gate.name in ("NOR2", "NOT", "NOR3")]
        assert len(gates) == 9                      # nine serial NOR gates
        assert len(b.ops) == 18                     # plus one init each

    def test_full_adder8(self):
        def emit(b, ins):
            s, co = b.alloc(2)
            b.full_adder8(ins[0], ins[1], ins[2], s, co)
            return s, co
        combos, (s, co) = run_cell(3, emit)
        for (a, x, c), sv, cv in zip(combos, s, co):
            assert sv == (a + x + c) % 2
            assert cv == (a + x + c) // 2

    def test_half_adder(self):
        def emit(b, ins):
            s, co = b.alloc(2)
            b.half_adder(ins[0], ins[1], s, co)
            return s, co
        combos, (s, co) = run_cell(2, emit)
        for (a, c), sv, cv in zip(combos, s, co):
            assert sv == a ^ c and cv == a & c

    def test_mux(self):
        def emit(b, ins):
            nsel = b.nor(ins[0])
            return b.mux(ins[0], nsel, ins[1], ins[2])
        combos, (out,) = run_cell(3, emit)
        for (sel, a, x), v in zip(combos, out):
            assert v == (a if sel else x)

    def test_xor(self):
        def emit(b, ins):
            return b.xor(ins[0], ins[1])
        combos, (out,) = run_cell(2, emit)
        for (a, x), v in zip(combos, out):
            assert v == a ^ x

    def test_cond_negate_increment(self):
        for width in (1, 3, 5):
            b = Builder(width + 1)
            zs = [b.alloc() for _ in range(width)]
            b.cond_negate_increment(list(range(width)), zs, width)
            cases = [(val, k) for val in range(1 << width) for k in (0, 1)]
            g = Grid(len(cases), b.width)
            for i in range(width):
                g.set_column(i, np.array([(v >> i) & 1 for v, _ in cases], dtype=np.uint8))
            g.set_column(width, np.array([k for _, k in cases], dtype=np.uint8))
            g.run(b.ops)
            cols = [g.column(zs[i]) for i in range(width)]
            for row, (val, k) in enumerate(cases):
                got = sum(int(cols[i][row]) << i for i in range(width))
                want = ((-val) if k else val) % (1 << width)
                assert got == want, (width, k, val)

    def test_count_leading_zeros(self):
        width, nbits = 11, 4
        b = Builder(width)
        lz = b.count_leading_zeros(list(range(width)), nbits)
        vals = list(range(1 << width))
        g = Grid(len(vals), b.width)
        for i in range(width):
            g.set_column(i, np.array([(v >> i) & 1 for v in vals], dtype=np.uint8))
        g.run(b.ops)
        cols = [g.column(lz[i]) for i in range(nbits)]
        for v in vals:
            got = sum(int(cols[i][v]) << i for i in range(nbits))
            assert got == width - v.bit_length(), v

    def test_reduce_trees(self):
        for width in (1, 2, 3, 4, 7, 9, 23):
            for pattern in (0, 1, (1 << width) - 1, 1 << (width - 1)):
                b = Builder(width)
                o = b.or_reduce(range(width))
                a = b.and_reduce(range(width))
                nz = b.nor_reduce(range(width))
                g = Grid(1, b.width)
                for i in range(width):
                    g.set_column(i, np.array([(pattern >> i) & 1], dtype=np.uint8))
                g.run(b.ops)
                assert int(g.column(o)[0]) == (1 if pattern else 0)
                assert int(g.column(a)[0]) == (1 if pattern == (1 << width) - 1 else 0)
                assert int(g.column(nz)[0]) == (0 if pattern else 1)

    def test_shift_right_jam(self):
        width = 9
        b = Builder(width + 3)
        amt_cols = [width + i for i in range(3)]
        b.shift_right_jam(list(range(width)), amt_cols, jam_lsb=True)
        cases = [(v, a) for v in (0b101100111, 0b100000000, 0b000000001, 0, 0b111111111)
                 for a in range(8)]
        g = Grid(len(cases), b.width)
        for i in range(width):
            g.set_column(i, np.array([(v >> i) & 1 for v, _ in cases], dtype=np.uint8))
        for i in range(3):
            g.set_column(amt_cols[i], np.array([(a >> i) & 1 for _, a in cases], dtype=np.uint8))
        g.run(b.ops)
        cols = [g.column(i) for i in range(width)]
        for row, (val, amt) in enumerate(cases):
            got = sum(int(cols[i][row]) << i for i in range(width))
            if amt == 0:
                want = val
            else:
                jam = 1 if (val & ((1 << (amt + 1)) - 1)) else 0
                want = ((val >> amt) & ~1) | jam
            assert got == want, (bin(val), amt, bin(got), bin(want))

    def test_memristive_profile(self):
        b = Builder(4)
        s, co = b.alloc(2)
        b.full_adder9(0, 1, 2, s, co)
        b.full_adder8(0, 1, 2, s, co)
        b.xor(0, 1)
        assert {op.gate for op in b.ops} <= MEMRISTIVE_GATES
