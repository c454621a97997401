"""IEEE-754 floating-point add and multiply as oblivious column programs.

Both kernels follow the standard exactly for the supported formats: signed
zeros, subnormals, infinities, NaN propagation (any NaN in -> canonical quiet
NaN out) and round-to-nearest-even. Control flow is data-independent: every
branch of a host float implementation becomes a predicated column select.

Datapath representation: significands carry the hidden bit (zero for
subnormal operands) over extension bits [J, R, G] below the mantissa. Right
shifts jam dropped bits into J (shiftRightJam semantics), which keeps
effective subtraction and rounding exact; a left normalization can move J
upward only when the prior alignment shift was <= 1, in which case J is
positional or zero.
"""

from __future__ import annotations

from ..errors import InvalidOperationError
from ..formats import NumberFormat
from .builder import Builder
from .program import ColumnProgram


def _check_float(fmt: NumberFormat) -> tuple[int, int]:
    if fmt.kind != "float":
        raise InvalidOperationError(f"float kernel needs a float format, got {fmt.name}")
    return fmt.exponent_bits, fmt.mantissa_bits


def _stages(max_shift: int) -> int:
    k = 0
    while (1 << k) - 1 < max_shift:
        k += 1
    return k


class _Operand:
    """Classification flags and adjusted fields for one input operand."""

    def __init__(self, b: Builder, sign: int, e_cols, m_cols):
        self.sign = sign
        self.nh = b.nor_reduce(e_cols)          # exponent == 0 (subnormal/zero)
        self.h = b.nor(self.nh)                 # hidden significand bit
        self.ne = [b.nor(c) for c in e_cols]    # raw exponent complements
        nemax = b.or_reduce(self.ne)
        self.emax = b.nor(nemax)                # exponent all ones
        self.nmnz = b.nor_reduce(m_cols)        # mantissa == 0
        mnz = b.nor(self.nmnz)
        self.nan = b.nor(nemax, self.nmnz)
        self.inf = b.nor(nemax, mnz)
        b.free([nemax, mnz])
        # effective exponent max(e, 1): bit 0 forced when the field is zero
        self.E = [b.or_(e_cols[0], self.nh)] + list(e_cols[1:])
        self.M = list(m_cols) + [self.h]        # significand with hidden bit

    def zero_flag(self, b: Builder) -> int:
        mnz = b.nor(self.nmnz)
        out = b.nor(self.h, mnz)
        b.free(mnz)
        return out


def _floor_at_one(b: Builder, bits, floor_flag: int):
    """max(value, 1): force 1 when floor_flag is set."""
    out = [b.or_(bits[0], floor_flag)]
    for c in bits[1:]:
        nc = b.nor(c)
        out.append(b.nor(nc, floor_flag))
        b.free(nc)
    return out




def _round_even(b: Builder, window, low_bits, ew, exp_bits, extra_inc: int | None = None):
    """RNE round of the significand window.

    window: [L .. hidden] significand columns; low_bits: [S.., G] columns below
    it (last one is G, the rest fold into sticky). Returns (Mro, hidden, Ez)
    where Ez = exp_bits + 1 + carry-out when extra_inc is given (folded
    exponent bias), else exp_bits + carry-out.
    """
    g = low_bits[-1]
    sticky_or = b.or_reduce(list(low_bits[:-1]) + [window[0]])
    ng = b.nor(g)
    nst = b.nor(sticky_or)
    rup = b.nor(ng, nst)                        # G & (S | L)
    b.free([sticky_or, ng, nst])
    w = len(window)
    mro = b.alloc(w)
    rnd_co = b.alloc()
    b.increment(window, mro, cin=rup, cout=rnd_co)
    hidden = b.or_(mro[w - 1], rnd_co)
    ez = b.alloc(ew)
    if extra_inc is not None:
        # Ez = exp + (1 + rnd_co): two's weight trick keeps it one ripple pass
        nco = b.nor(rnd_co)
        ys = [nco, rnd_co] + [b.zero()] * (ew - 2)
        b.ripple_add(exp_bits, ys, ez)
        b.free(nco)
    else:
        b.increment(exp_bits, ez, cin=rnd_co)
    b.free([rup, rnd_co])
    return mro, hidden, ez


def _overflow_flag(b: Builder, ez, ne_bits: int) -> int:
    """Ez >= 2^ne - 1 for a non-negative Ez in ne+2 bits."""
    lowmax = b.and_reduce(ez[:ne_bits])
    out = b.or_(ez[ne_bits], ez[ne_bits + 1], lowmax)
    b.free(lowmax)
    return out


def _write_result(b: Builder, z_m, z_e, z_s, m_field, e_bits, hidden, sign_col,
                  nan_out, inf_out):
    """Final field assembly, forcing NaN/inf patterns over the datapath."""
    force = b.or_(nan_out, inf_out)             # exponent -> all ones
    nhidden = b.nor(hidden)
    for i, col in enumerate(z_m):
        nm = b.nor(m_field[i])
        if i == len(z_m) - 1:                   # quiet bit position
            t = b.nor(nm, force)
            no = b.nor(t, nan_out)
            b.nor(no, out=col)                  # (m & ~force) | nan
            b.free([t, no])
        else:
            b.nor(nm, force, out=col)
        b.free(nm)
    for i, col in enumerate(z_e):
        nei = b.nor(e_bits[i])
        t = b.nor(nei, nhidden)                 # Ez_i & hidden
        no = b.nor(t, force)
        b.nor(no, out=col)
        b.free([nei, t, no])
    ns = b.nor(sign_col)
    b.nor(ns, nan_out, out=z_s)                 # sign & ~nan
    b.free([ns, force, nhidden])


def build_float_add(fmt: NumberFormat) -> ColumnProgram:
    """z = round_to_nearest_even(u + v), bit-exact IEEE-754."""
    ne, nm = _check_float(fmt)
    n = fmt.total_bits
    u, v, z = list(range(n)), list(range(n, 2 * n)), list(range(2 * n, 3 * n))
    b = Builder(3 * n)
    um, ue, us = u[:nm], u[nm:nm + ne], u[n - 1]
    vm, ve, vs = v[:nm], v[nm:nm + ne], v[n - 1]
    zm, ze, zs = z[:nm], z[nm:nm + ne], z[n - 1]
    one = b.one()
    zero = b.zero()

    b.mark("classify")
    X = _Operand(b, us, ue, um)
    Y = _Operand(b, vs, ve, vm)

    b.mark("swap")
    # d = Ex - Ey; borrow decides which operand aligns
    d = b.alloc(ne)
    ney0 = b.nor(Y.E[0])
    nys = [ney0] + Y.ne[1:]
    nswap = b.alloc()
    b.ripple_add(X.E, nys, d, cin=one, cout=nswap)
    swap = b.nor(nswap)
    b.free(ney0)
    Ea = [b.mux(swap, nswap, Y.E[i], X.E[i]) for i in range(ne)]
    sa = b.mux(swap, nswap, Y.sign, X.sign)
    Ma = [b.mux(swap, nswap, Y.M[i], X.M[i]) for i in range(nm + 1)]
    Mb = [b.mux(swap, nswap, X.M[i], Y.M[i]) for i in range(nm + 1)]

    b.mark("align")
    absd = b.alloc(ne)
    b.cond_negate_increment(d, absd, swap)
    b.free(d)
    k_align = _stages(nm + 3)
    big = b.or_reduce(absd[k_align:]) if ne > k_align else None
    sels = [b.or_(absd[i], big) if big is not None else absd[i]
            for i in range(k_align)]
    grs = b.alloc(3)
    for c in grs:
        b.init(c, 0)
    field = grs + Mb                            # [J, R, G, mantissa...]
    b.shift_right_jam(field, sels, jam_lsb=True)
    if big is not None:
        b.free(big)
        b.free(sels)
    b.free(absd)

    b.mark("addsub")
    eff = b.xor(X.sign, Y.sign)
    neff = b.nor(eff)
    w2 = nm + 4
    T = b.alloc(w2)
    co = b.alloc()
    carry = b.alloc()
    cin = eff
    for j in range(w2):
        bx = b.xor(field[j], eff, nb=neff)
        c_out = carry if j < w2 - 1 else co
        if j < 3:
            b.half_adder(bx, cin, T[j], c_out)  # A side J/R/G are zero
        else:
            b.full_adder8(Ma[j - 3], bx, cin, T[j], c_out)
        b.free(bx)
        cin = c_out
    nco = b.nor(co)
    neg = b.nor(neff, co)                       # effective sub with A < B
    vtop = b.nor(eff, nco)                      # carry is a value bit for add
    b.free([nco, carry] + field + Ma)

    b.mark("normalize")
    mag = b.alloc(w2)
    b.cond_negate_increment(T, mag, neg)
    b.free(T)
    V = mag + [vtop]
    nzv = b.or_reduce(V)                        # exact-zero detect (pre-round)
    k_norm = _stages(len(V))
    # left shift by min(lz, Ea): normalizes, or lands exactly on the subnormal
    # grid when the exponent budget runs out first
    lz = b.count_leading_zeros(V, k_norm)
    nlz = [b.nor(c) for c in lz]
    cmp_ = b.alloc(ne + 2)
    no_borrow = b.alloc()
    b.ripple_add(Ea + [zero, zero], nlz + [one] * (ne + 2 - k_norm), cmp_,
                 cin=one, cout=no_borrow)       # Ea - lz
    b.free(cmp_)
    sel_small = b.nor(no_borrow)                # Ea < lz: budget caps the shift
    amt = [b.mux(sel_small, no_borrow, Ea[i], lz[i]) for i in range(k_norm)]
    b.free(nlz)
    b.free(lz)
    b.shift_left(V, amt)

    b.mark("exponent")
    ew = ne + 2
    namt = [b.nor(c) for c in amt]
    q = b.alloc(ew)                             # q = Ea - amt >= 0; Ez = q + 1
    b.ripple_add(Ea + [zero, zero], namt + [one] * (ew - k_norm), q, cin=one)
    b.free(namt)
    b.free(amt)

    b.mark("round")
    Mro, hidden, Ez2 = _round_even(b, V[4:], [V[0], V[1], V[2], V[3]], ew, q,
                                   extra_inc=1)
    ovf = _overflow_flag(b, Ez2, ne)

    b.mark("sign")
    nneg = b.nor(neg)
    sdiff = b.xor(sa, neg, nb=nneg)
    nsd = b.nor(sdiff)
    nnzv = b.nor(nzv)
    ssub = b.nor(nsd, nnzv)                     # exact cancellation -> +0
    sdata = b.mux(eff, neff, ssub, X.sign)
    b.free([nneg, nsd, nnzv])

    b.mark("specials")
    nxinf = b.nor(X.inf)
    nyinf = b.nor(Y.inf)
    both_inf = b.nor(nxinf, nyinf)
    nboth = b.nor(both_inf)
    inf_conflict = b.nor(nboth, neff)           # inf - inf
    nan_out = b.or_(X.nan, Y.nan, inf_conflict)
    any_inf = b.or_(X.inf, Y.inf)
    ovf_or_inf = b.or_(any_inf, ovf)
    novf_inf = b.nor(ovf_or_inf)
    inf_out = b.nor(novf_inf, nan_out)
    s_vi = b.mux(Y.inf, nyinf, Y.sign, sdata)
    sgn = b.mux(X.inf, nxinf, X.sign, s_vi)

    _write_result(b, zm, ze, zs, Mro, Ez2, hidden, sgn, nan_out, inf_out)

    return ColumnProgram(
        name=f"fadd-{fmt.name}", kind="add", format=fmt, ops=b.ops,
        u_cols=u, v_cols=v, z_cols=z, width=b.width)


def build_float_mult(fmt: NumberFormat) -> ColumnProgram:
    """z = round_to_nearest_even(u * v), bit-exact IEEE-754."""
    ne, nm = _check_float(fmt)
    n = fmt.total_bits
    u, v, z = list(range(n)), list(range(n, 2 * n)), list(range(2 * n, 3 * n))
    b = Builder(3 * n)
    um, ue, us = u[:nm], u[nm:nm + ne], u[n - 1]
    vm, ve, vs = v[:nm], v[nm:nm + ne], v[n - 1]
    zm, ze, zs = z[:nm], z[nm:nm + ne], z[n - 1]
    one = b.one()
    zero = b.zero()
    w = nm + 1
    ew = ne + 2

    b.mark("classify")
    X = _Operand(b, us, ue, um)
    Y = _Operand(b, vs, ve, vm)
    sz = b.xor(X.sign, Y.sign)

    b.mark("prenormalize")
    # at most one operand needs normalizing: two subnormals underflow to zero
    xsub, nxsub = X.nh, X.h
    Msel = [b.mux(xsub, nxsub, X.M[i], Y.M[i]) for i in range(w)]
    k_pre = _stages(w)
    t_amt = b.normalize_left(Msel, k_pre)
    Mx = [b.mux(xsub, nxsub, Msel[i], X.M[i]) for i in range(w)]
    My = [b.mux(xsub, nxsub, Y.M[i], Msel[i]) for i in range(w)]
    b.free(Msel)

    b.mark("exponent")
    # Ez = Ex + Ey - bias - prenormalize shift
    s1 = b.alloc(ew)
    b.ripple_add(X.E, Y.E, s1[:ne], cout=s1[ne])
    b.init(s1[ne + 1], 0)
    nbias = [zero] * (ne - 1) + [one] * (ew - ne + 1)
    s2 = b.alloc(ew)
    b.ripple_add(s1, nbias, s2, cin=one)
    b.free(s1)
    nts = [b.nor(c) for c in t_amt] + [one] * (ew - k_pre)
    Ez = b.alloc(ew)
    b.ripple_add(s2, nts, Ez, cin=one)
    b.free(nts[:k_pre])
    b.free(s2)

    b.mark("product")
    P = b.alloc(2 * w)
    notx = [b.nor(c) for c in Mx]
    noty = b.alloc()
    pp = b.alloc()
    carry = b.alloc()
    for i in range(w):
        b.nor(My[i], out=noty)
        if i == 0:
            for j in range(w):
                b.nor(notx[j], noty, out=P[j])
            for j in range(w, 2 * w):
                b.init(P[j], 0)
            continue
        b.init(carry, 0)
        for j in range(w):
            b.nor(notx[j], noty, out=pp)
            c_out = carry if j < w - 1 else P[i + w]
            b.full_adder8(P[i + j], pp, carry, P[i + j], c_out)
    b.free([noty, pp, carry] + notx + Mx + My)

    b.mark("postnorm")
    # both significands normalized -> product top bit at 2w-1 or 2w-2
    pco = P[2 * w - 1]
    npco = b.nor(pco)
    M = [b.mux(pco, npco, P[w + k], P[w - 1 + k]) for k in range(w)]
    G = b.mux(pco, npco, P[w - 1], P[w - 2])
    sbase = b.or_reduce(P[: w - 2])
    shi = b.or_(sbase, P[w - 2])
    S = b.mux(pco, npco, shi, sbase)
    b.free([sbase, shi, npco])
    Ez2 = b.alloc(ew)
    b.increment(Ez, Ez2, cin=pco)
    b.free(Ez)
    b.free(P)

    b.mark("fixup")
    # underflow: shift right by max(0, 1 - Ez2), saturated past the field width
    ney = [b.nor(c) for c in Ez2]
    t2 = b.alloc(ew)
    b.ripple_add([one] + [zero] * (ew - 1), ney, t2, cin=one)   # 1 - Ez2
    b.free(ney)
    fneg = t2[ew - 1]
    nfneg = b.nor(fneg)
    field = [S, G] + M                          # J=S jams, G, significand
    k_fix = _stages(len(field))
    pos_bits = []
    for i in range(ew - 1):
        nt = b.nor(t2[i])
        pos_bits.append(b.nor(nt, fneg))        # t2_i & (t2 >= 0)
        b.free(nt)
    bigf = b.or_reduce(pos_bits[k_fix:]) if ew - 1 > k_fix else None
    fsel = [b.or_(pos_bits[i], bigf) if bigf is not None else pos_bits[i]
            for i in range(k_fix)]
    b.shift_right_jam(field, fsel, jam_lsb=True)
    if bigf is not None:
        b.free(bigf)
        b.free(fsel)
    b.free(pos_bits)
    qf = _floor_at_one(b, Ez2, nfneg)           # Ez floored at 1
    b.free(t2)
    b.free(Ez2)

    b.mark("round")
    Mro, hidden, Ez3 = _round_even(b, field[2:], [field[0], field[1]], ew, qf)
    ovf = _overflow_flag(b, Ez3, ne)

    b.mark("specials")
    uz = X.zero_flag(b)
    vz = Y.zero_flag(b)
    nxinf = b.nor(X.inf)
    nyinf = b.nor(Y.inf)
    nuz = b.nor(uz)
    nvz = b.nor(vz)
    c1 = b.nor(nxinf, nvz)                      # inf * 0
    c2 = b.nor(nyinf, nuz)
    c12 = b.or_(c1, c2)
    nan_out = b.or_(X.nan, Y.nan, c12)
    any_inf = b.or_(X.inf, Y.inf)
    ovf_or_inf = b.or_(any_inf, ovf)
    novf_inf = b.nor(ovf_or_inf)
    inf_out = b.nor(novf_inf, nan_out)

    _write_result(b, zm, ze, zs, Mro, Ez3, hidden, sz, nan_out, inf_out)

    return ColumnProgram(
        name=f"fmult-{fmt.name}", kind="mult", format=fmt, ops=b.ops,
        u_cols=u, v_cols=v, z_cols=z, width=b.width)
