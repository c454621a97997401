import numpy as np
import pytest

from colpim import half, single
from colpim.errors import InvalidOperationError
from colpim.grid import MEMRISTIVE_GATES
from colpim.kernels import (CALIBRATED_LATENCIES, build_float_add,
                            build_float_mult, run_cases, verify_kernel)
from conftest import float_edge_patterns


def pat(fmt, value):
    return int(fmt.encode([value])[0])


class TestFloatAdd:
    def test_one_plus_one(self, fadd32):
        f = single()
        got = run_cases(fadd32, np.array([pat(f, 1.0)], dtype=np.uint64),
                        np.array([pat(f, 1.0)], dtype=np.uint64))
        assert f.decode(got)[0] == 2.0

    def test_rne_tie_to_even(self, fadd32):
        f = single()
        got = run_cases(fadd32, np.array([pat(f, 1.0)], dtype=np.uint64),
                        np.array([pat(f, 2.0 ** -24)], dtype=np.uint64))
        assert got[0] == pat(f, 1.0)        # halfway, rounds to even

    def test_edge_cross_product_half(self, fadd16, edge_pairs_half):
        rep = verify_kernel(fadd16, samples=2, seed=0, extra_pairs=edge_pairs_half)
        assert rep.passed, rep.summary()

    def test_edge_cross_product_single(self, fadd32, edge_pairs_single):
        rep = verify_kernel(fadd32, samples=2, seed=0, extra_pairs=edge_pairs_single)
        assert rep.passed, rep.summary()

    def test_random_half(self, fadd16):
        assert verify_kernel(fadd16, samples=50000, seed=21).passed

    def test_random_single(self, fadd32):
        assert verify_kernel(fadd32, samples=50000, seed=22).passed

    def test_signed_zero_rules(self, fadd32):
        f = single()
        cases = [(0.0, -0.0, 0.0), (-0.0, -0.0, -0.0), (1.5, -1.5, 0.0)]
        for a, b, want in cases:
            got = f.decode(run_cases(
                fadd32, np.array([pat(f, a)], dtype=np.uint64),
                np.array([pat(f, b)], dtype=np.uint64)))[0]
            assert got == want and np.signbit(got) == np.signbit(np.float32(want))

    def test_inf_minus_inf_is_nan(self, fadd32):
        f = single()
        inf, ninf = pat(f, np.inf), pat(f, -np.inf)
        got = f.decode(run_cases(fadd32, np.array([inf], dtype=np.uint64),
                                 np.array([ninf], dtype=np.uint64)))[0]
        assert np.isnan(got)

    def test_nan_is_canonical_quiet(self, fadd16):
        f = half()
        snan = (0x1F << 10) | 1
        got = run_cases(fadd16, np.array([snan], dtype=np.uint64),
                        np.array([pat(f, 1.0)], dtype=np.uint64))
        assert got[0] == 0x7E00

    def test_rejects_fixed_format(self):
        from colpim import fixed
        with pytest.raises(InvalidOperationError):
            build_float_add(fixed(32))


class TestFloatMult:
    def test_exact_product(self, fmult32):
        f = single()
        got = f.decode(run_cases(fmult32, np.array([pat(f, 1.5)], dtype=np.uint64),
                                 np.array([pat(f, 2.0)], dtype=np.uint64)))[0]
        assert got == 3.0

    def test_multiplicative_identity(self, fmult32):
        f = single()
        rng = np.random.default_rng(9)
        xs = rng.integers(0, 1 << 32, size=2000, dtype=np.uint64)
        finite = np.isfinite(f.decode(xs))
        xs = xs[finite]
        one = np.full(len(xs), pat(f, 1.0), dtype=np.uint64)
        got = run_cases(fmult32, xs, one)
        assert np.array_equal(got, xs)

    def test_inf_times_zero_is_nan(self, fmult32):
        f = single()
        got = f.decode(run_cases(fmult32, np.array([pat(f, np.inf)], dtype=np.uint64),
                                 np.array([pat(f, -0.0)], dtype=np.uint64)))[0]
        assert np.isnan(got)

    def test_edge_cross_product_half(self, fmult16, edge_pairs_half):
        rep = verify_kernel(fmult16, samples=2, seed=0, extra_pairs=edge_pairs_half)
        assert rep.passed, rep.summary()

    def test_edge_cross_product_single(self, fmult32, edge_pairs_single):
        rep = verify_kernel(fmult32, samples=2, seed=0, extra_pairs=edge_pairs_single)
        assert rep.passed, rep.summary()

    def test_random_half(self, fmult16):
        assert verify_kernel(fmult16, samples=50000, seed=31).passed

    def test_random_single(self, fmult32):
        assert verify_kernel(fmult32, samples=50000, seed=32).passed

    def test_subnormal_products(self, fmult32):
        f = single()
        tiny = pat(f, 2.0 ** -140)
        pairs = [(tiny, pat(f, 0.5)), (tiny, tiny), (1, 1),
                 (tiny, pat(f, 2.0 ** 120)), (pat(f, 2.0 ** -126), pat(f, 1.5))]
        extra = [(np.uint64(a), np.uint64(b)) for a, b in pairs]
        rep = verify_kernel(fmult32, samples=2, seed=0, extra_pairs=extra)
        assert rep.passed, rep.summary()


class TestStructure:
    def test_oblivious_and_deterministic_build(self):
        p1 = build_float_add(half())
        p2 = build_float_add(half())
        assert p1.ops == p2.ops                # gate sequence is data-independent

    def test_memristive_profile(self, fadd32, fmult32):
        for prog in (fadd32, fmult32):
            assert {op.gate for op in prog.ops} <= MEMRISTIVE_GATES

    def test_element_parallelism(self, fmult16, edge_pairs_half):
        sub = edge_pairs_half[::37][:48]
        u = np.array([a for a, _ in sub], dtype=np.uint64)
        v = np.array([b for _, b in sub], dtype=np.uint64)
        batched = run_cases(fmult16, u, v)
        singles = [run_cases(fmult16, u[i:i + 1], v[i:i + 1])[0]
                   for i in range(len(sub))]
        assert list(batched) == singles

    def test_latency_within_calibration_window(self, fadd32, fmult32):
        for prog, key in ((fadd32, ("add", "fp32")), (fmult32, ("mult", "fp32"))):
            cal = CALIBRATED_LATENCIES[key]
            assert abs(prog.latency_cycles - cal) / cal <= 0.25

    def test_output_layout_disjoint(self, fadd32):
        assert not set(fadd32.z_cols) & (set(fadd32.u_cols) | set(fadd32.v_cols))

    def test_edge_patterns_cover_specials(self):
        f = half()
        vals = f.decode(np.array(float_edge_patterns(f), dtype=np.uint64))
        assert np.isnan(vals).any()
        assert np.isinf(vals).any()
        finite = vals[np.isfinite(vals)]
        nz = finite[finite != 0]
        assert (np.abs(nz) < 2.0 ** -14).any()     # subnormals present
        assert (vals == 0).any()
