"""Straight-line column-program construction helpers.

Every value-producing gate is emitted as an initialization cycle followed by
the gate cycle (stateful logic cannot write an uninitialized output cell), so
a g-gate cell costs 2g cycles. Programs stay within the memristive gate
profile {INIT0, INIT1, NOT, NOR2, NOR3}.

The fixed-width cell netlists (full adders, half adder, mux, xor) were found
by exhaustive search over NOR2/NOR3 circuits (tools/find_gate_decompositions.py)
and are verified over all input combinations in the test suite.
"""

from __future__ import annotations

from ..errors import InvalidOperationError
from ..grid import ColumnOp, Gate


class Builder:
    """Emits column ops and manages scratch-column allocation."""

    def __init__(self, reserved: int):
        self.ops: list[ColumnOp] = []
        self._next = reserved
        self._free: list[int] = []
        self._zero: int | None = None
        self._one: int | None = None
        self._marks: list[tuple[str, int]] = []

    def mark(self, label: str) -> None:
        """Record a section boundary for latency profiling."""
        self._marks.append((label, len(self.ops)))

    def sections(self) -> list[tuple[str, int]]:
        out = []
        for i, (label, start) in enumerate(self._marks):
            end = self._marks[i + 1][1] if i + 1 < len(self._marks) else len(self.ops)
            out.append((label, end - start))
        return out

    # -- scratch management ------------------------------------------------

    def alloc(self, n: int = 1):
        cols = []
        for _ in range(n):
            cols.append(self._free.pop() if self._free else self._next)
            if cols[-1] == self._next:
                self._next += 1
        return cols[0] if n == 1 else cols

    def free(self, cols) -> None:
        if isinstance(cols, int):
            cols = [cols]
        for c in cols:
            self._free.append(c)

    @property
    def width(self) -> int:
        return self._next

    def zero(self) -> int:
        """Column holding constant 0 (initialized once, shared)."""
        if self._zero is None:
            self._zero = self.alloc()
            self.raw(Gate.INIT0, (), self._zero)
        return self._zero

    def one(self) -> int:
        if self._one is None:
            self._one = self.alloc()
            self.raw(Gate.INIT1, (), self._one)
        return self._one

    # -- op emission ---------------------------------------------------------

    def raw(self, gate: Gate, ins, out: int) -> int:
        self.ops.append(ColumnOp(gate, tuple(ins), out))
        return out

    def init(self, out: int, value: int) -> int:
        return self.raw(Gate.INIT1 if value else Gate.INIT0, (), out)

    def nor(self, *ins, out: int | None = None) -> int:
        """INIT1 + NOR (2 cycles). One input acts as NOT."""
        if out is None:
            out = self.alloc()
        self.raw(Gate.INIT1, (), out)
        gate = {1: Gate.NOT, 2: Gate.NOR2, 3: Gate.NOR3}[len(ins)]
        self.raw(gate, ins, out)
        return out

    def not_(self, a: int, out: int | None = None) -> int:
        return self.nor(a, out=out)

    # -- composite cells -----------------------------------------------------

    def or_(self, *ins, out: int | None = None) -> int:
        t = self.nor(*ins)
        out = self.nor(t, out=out)
        self.free(t)
        return out

    def and_(self, a: int, b: int, na: int | None = None, nb: int | None = None,
             out: int | None = None) -> int:
        """a AND b = NOR(~a, ~b); complements reused when already available."""
        tmp = []
        if na is None:
            na = self.nor(a)
            tmp.append(na)
        if nb is None:
            nb = self.nor(b)
            tmp.append(nb)
        out = self.nor(na, nb, out=out)
        self.free(tmp)
        return out

    def mux(self, sel: int, nsel: int, a: int, b: int, out: int | None = None) -> int:
        """out = a if sel else b   (3 gates, ~sel supplied by caller)."""
        t1 = self.nor(nsel, a)   # sel & ~a
        t2 = self.nor(sel, b)    # ~sel & ~b
        out = self.nor(t1, t2, out=out)
        self.free([t1, t2])
        return out

    def xor(self, a: int, b: int, nb: int | None = None, out: int | None = None) -> int:
        """a XOR b; 4 gates when ~b is already available, 5 otherwise."""
        tmp = []
        if nb is None:
            nb = self.nor(b)
            tmp.append(nb)
        na = self.nor(a)
        t1 = self.nor(a, b)
        t2 = self.nor(na, nb)          # a & b
        out = self.nor(t1, t2, out=out)
        self.free(tmp + [na, t1, t2])
        return out

    def xnor(self, a: int, b: int, out: int | None = None) -> int:
        t = self.xor(a, b)
        out = self.nor(t, out=out)
        self.free(t)
        return out

    def full_adder9(self, a: int, b: int, cin: int, s: int, cout: int,
                    init_cout: bool = True) -> None:
        """Ripple-carry full adder from 9 serial NOR2 gates.

        When init_cout is False the caller has already initialized the cout
        column (used to fold the zero carry-in into the first adder slice).
        """
        t1, t2, t3, t4, t5, t6, t7 = (self.alloc() for _ in range(7))
        self.nor(a, b, out=t1)
        self.nor(a, t1, out=t2)
        self.nor(b, t1, out=t3)
        self.nor(t2, t3, out=t4)       # xnor(a, b)
        self.nor(t4, cin, out=t5)
        self.nor(t4, t5, out=t6)
        self.nor(cin, t5, out=t7)
        self.nor(t6, t7, out=s)        # sum
        if init_cout:
            self.raw(Gate.INIT1, (), cout)
        self.raw(Gate.NOR2, (t1, t5), cout)  # majority(a, b, cin)
        self.free([t1, t2, t3, t4, t5, t6, t7])

    def full_adder8(self, a: int, b: int, cin: int, s: int, cout: int) -> None:
        """Compact 8-gate NOR2/NOR3 full adder (exhaustive-search minimum)."""
        t0, t1, t2, t3, t4, t5 = (self.alloc() for _ in range(6))
        self.nor(a, b, out=t0)
        self.nor(a, cin, t0, out=t1)
        self.nor(a, t0, t1, out=t2)
        self.nor(b, cin, t0, out=t3)
        self.nor(b, t0, t3, out=t4)
        self.nor(cin, t1, t3, out=t5)
        self.nor(t0, t1, t3, out=cout)
        self.nor(t2, t4, t5, out=s)
        self.free([t0, t1, t2, t3, t4, t5])

    def half_adder(self, a: int, b: int, s: int, cout: int) -> None:
        """5-gate half adder: s = a^b, cout = a&b."""
        na = self.nor(a)
        nb = self.nor(b)
        t = self.nor(a, b)
        self.nor(na, nb, out=cout)
        self.nor(t, cout, out=s)
        self.free([na, nb, t])

    # -- ripple chains ---------------------------------------------------------

    def ripple_add(self, xs, ys, zs, cin: int | None = None,
                   cout: int | None = None, compact: bool = True) -> None:
        """zs = xs + ys (+ cin) over equal-width little-endian columns."""
        n = len(xs)
        assert len(ys) == n and len(zs) == n
        fa = self.full_adder8 if compact else self.full_adder9
        ca, cb = self.alloc(2)
        if cin is None:
            cin = ca
            self.init(ca, 0)
        carry_in = cin
        for i in range(n):
            carry_out = (ca if i % 2 else cb) if (i < n - 1 or cout is None) else cout
            fa(xs[i], ys[i], carry_in, zs[i], carry_out)
            carry_in = carry_out
        self.free([ca, cb])

    def ripple_sub(self, xs, ys, zs, cout: int | None = None,
                   compact: bool = True) -> None:
        """zs = xs - ys (two's complement); cout = 1 iff xs >= ys (no borrow)."""
        n = len(xs)
        nys = [self.nor(y) for y in ys]
        one = self.one()
        self.ripple_add(xs, nys, zs, cin=one, cout=cout, compact=compact)
        self.free(nys)

    def increment(self, xs, zs, cin: int, cout: int | None = None) -> None:
        """zs = xs + cin (single-bit ripple increment, 5-gate slices)."""
        n = len(xs)
        ca, cb = self.alloc(2)
        carry_in = cin
        for i in range(n):
            carry_out = (ca if i % 2 else cb) if (i < n - 1 or cout is None) else cout
            self.half_adder(xs[i], carry_in, zs[i], carry_out)
            carry_in = carry_out
        self.free([ca, cb])

    def cond_negate_increment(self, xs, zs, k: int) -> None:
        """zs = xs if k == 0 else (~xs + 1), via 7-gate (x^k)+carry slices.

        The carry-in of the first slice is the flag itself, so the conditional
        two's-complement costs one searched cell per bit plus one hoisted ~k.
        """
        n = len(xs)
        nk = self.nor(k)
        carry = self.alloc()
        c_in = k
        for i in range(n):
            x = xs[i]
            t0 = self.nor(x)
            t2 = self.nor(x, k)
            t3 = self.nor(t0, nk)                 # x & k
            t4 = self.nor(c_in, t2, t3)           # (x^k) & ~c
            t5 = self.nor(c_in, t4)               # ~(x^k) & ~c
            self.nor(t2, t3, t4, out=carry)       # carry' = (x^k) & c
            self.nor(t5, carry, out=zs[i])        # sum = x ^ k ^ c
            self.free([t0, t2, t3, t4, t5])
            c_in = carry
        self.free([carry, nk])

    # -- reductions -------------------------------------------------------------

    def nor_reduce(self, cols, out: int | None = None) -> int:
        """out = 1 iff every column bit is 0 (NOR3 tree)."""
        cols = list(cols)
        if len(cols) == 0:
            raise InvalidOperationError("empty reduction")
        if len(cols) <= 3:
            return self.nor(*cols, out=out)
        third = (len(cols) + 2) // 3
        groups = [cols[i:i + third] for i in range(0, len(cols), third)]
        ors = [self.or_reduce(g) for g in groups]
        out = self.nor(*ors, out=out)
        self.free(ors)
        return out

    def or_reduce(self, cols, out: int | None = None) -> int:
        t = self.nor_reduce(cols)
        out = self.nor(t, out=out)
        self.free(t)
        return out

    def and_reduce(self, cols, out: int | None = None) -> int:
        nots = [self.nor(c) for c in cols]
        out = self.nor_reduce(nots, out=out)
        self.free(nots)
        return out

    # -- shifters ---------------------------------------------------------------

    def shift_right_jam(self, field, amount, jam_lsb: bool = False) -> None:
        """In-place variable right shift of little-endian field by amount.

        Vacated high positions fill with 0. With jam_lsb, everything shifted
        past position 0 ORs into the new bit 0 (shiftRightJam semantics), so
        rounding information survives the shift. amount bits beyond the staged
        range must be folded into amount by the caller.
        """
        w = len(field)
        for i, sel in enumerate(amount):
            step = 1 << i
            nsel = self.nor(sel)
            if jam_lsb:
                # new bit 0 = OR of the incoming bit and everything dropped
                orv = self.or_reduce(field[: min(step + 1, w)])
                self.mux(sel, nsel, orv, field[0], out=field[0])
                self.free(orv)
            start = 1 if jam_lsb else 0
            for j in range(start, w):
                if j + step < w:
                    self.mux(sel, nsel, field[j + step], field[j], out=field[j])
                else:
                    nf = self.nor(field[j])
                    self.nor(sel, nf, out=field[j])   # ~sel & old
                    self.free(nf)
            self.free(nsel)

    def shift_left(self, field, amount) -> None:
        """In-place variable left shift (zero fill at the low end)."""
        w = len(field)
        for i, sel in enumerate(amount):
            step = 1 << i
            if step >= w:
                break
            nsel = self.nor(sel)
            for j in reversed(range(w)):
                if j - step >= 0:
                    self.mux(sel, nsel, field[j - step], field[j], out=field[j])
                else:
                    nf = self.nor(field[j])
                    self.nor(sel, nf, out=field[j])
                    self.free(nf)
            self.free(nsel)

    def normalize_left(self, field, n_stages: int):
        """Shift field left until its top bit is set (or it is exhausted).

        Returns the shift amount as little-endian condition bits
        (amount[k] set iff a shift by 2^k happened). Staged top-down, so the
        total shift is the leading-zero count clamped to 2**n_stages - 1.
        """
        w = len(field)
        amount = []
        for k in reversed(range(n_stages)):
            step = 1 << k
            det = self.nor_reduce(field[w - min(step, w):])
            ndet = self.nor(det)
            for j in reversed(range(w)):
                if j - step >= 0:
                    self.mux(det, ndet, field[j - step], field[j], out=field[j])
                else:
                    nf = self.nor(field[j])
                    self.nor(det, nf, out=field[j])
                    self.free(nf)
            self.free(ndet)
            amount.append(det)
        amount.reverse()
        return amount

    def count_leading_zeros(self, field, nbits: int):
        """Binary leading-zero count of a little-endian field, without shifting.

        Builds the zero-prefix thermometer (p[j] = 1 iff field[j..top] is all
        zero), then binary-searches it: bit k of the count selects among
        thermometer taps according to the higher count bits.
        """
        w = len(field)
        p = [self.alloc() for _ in range(w)]
        self.nor(field[w - 1], out=p[w - 1])
        np_prev = self.nor(p[w - 1])
        for j in range(w - 2, -1, -1):
            self.nor(field[j], np_prev, out=p[j])
            self.nor(p[j], out=np_prev)
        self.free(np_prev)
        zero = self.zero()

        def tap(threshold: int) -> int:
            idx = w - threshold
            return p[idx] if idx >= 0 else zero

        def select(cands, sel_bits, nsel_bits):
            if len(cands) == 1:
                return cands[0], False
            half = len(cands) // 2
            lo, flo = select(cands[:half], sel_bits[1:], nsel_bits[1:])
            hi, fhi = select(cands[half:], sel_bits[1:], nsel_bits[1:])
            out = self.mux(sel_bits[0], nsel_bits[0], hi, lo)
            if flo:
                self.free(lo)
            if fhi:
                self.free(hi)
            return out, True

        bits_hi: list[int] = []      # count bits, most significant first
        nbits_hi: list[int] = []
        for k in reversed(range(nbits)):
            d = len(bits_hi)
            cands = []
            for m in range(1 << d):
                partial = 0
                for i in range(d):
                    if (m >> (d - 1 - i)) & 1:
                        partial += 1 << (nbits - 1 - i)
                cands.append(tap(partial + (1 << k)))
            col, fresh = select(cands, bits_hi, nbits_hi)
            if not fresh:                        # bare tap: own a copy
                t = self.nor(col)
                col = self.nor(t)
                self.free(t)
            bits_hi.append(col)
            nbits_hi.append(self.nor(col))
        self.free(p)
        self.free(nbits_hi)
        return list(reversed(bits_hi))

    def copy(self, src, dst) -> None:
        if isinstance(src, int):
            src, dst = [src], [dst]
        for a, b in zip(src, dst):
            t = self.nor(a)
            self.nor(t, out=b)
            self.free(t)
