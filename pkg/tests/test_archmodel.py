import math

import pytest

from colpim.archmodel import (A6000, DRAM, GIB, MEMRISTIVE, GpuArch, PimArch,
                              derive, gpu_membound_perf, gpu_peak_perf,
                              improvement_ratio, pim_vector_perf,
                              vector_improvement_closed_form, load_architectures)
from colpim.bench import DEFAULT_CONFIG
from colpim.errors import InvalidOperationError


class TestDerive:
    def test_memristive_table_row(self):
        d = derive(MEMRISTIVE)
        assert d.num_crossbars == 393216
        assert d.total_rows == 402_653_184
        assert abs(d.max_power - 858.13) < 0.1
        assert abs(d.max_power - 860) / 860 < 0.01      # table rounds to 860 W

    def test_dram_table_row(self):
        d = derive(DRAM)
        assert d.num_crossbars == 6144
        assert d.total_rows == 402_653_184
        assert abs(d.max_power - 78.72) < 0.02
        assert abs(d.max_power - 80) / 80 < 0.02        # table rounds to 80 W

    def test_unit_crossbar(self):
        a = PimArch("unit", 1, 1, 1, 1e-15, 1e6)
        # 1 byte = 8 bits = 8 one-cell crossbars
        d = derive(a)
        assert d.num_crossbars == 8 and d.total_rows == 8
        assert d.max_power == pytest.approx(8 * 1e-15 * 1e6)

    def test_indivisible_memory_rejected(self):
        with pytest.raises(InvalidOperationError):
            PimArch("bad", 1000, 1000, 48 * GIB, 1e-15, 1e6)

    def test_nonpositive_rejected(self):
        with pytest.raises(InvalidOperationError):
            PimArch("bad", 1024, 1024, 48 * GIB, -1e-15, 1e6)


class TestVectorPerf:
    def test_unit_latency(self):
        p = pim_vector_perf(MEMRISTIVE, 1)
        d = derive(MEMRISTIVE)
        assert p.throughput == d.total_rows * MEMRISTIVE.clock

    def test_fig3_add_point(self):
        p = pim_vector_perf(MEMRISTIVE, 578)
        assert abs(p.throughput - 2.33e14) / 2.33e14 < 0.01
        assert abs(p.energy_efficiency - 2.71e11) / 2.71e11 < 0.01

    def test_dram_add_point(self):
        p = pim_vector_perf(DRAM, 578)
        assert abs(p.throughput - 3.49e11) / 3.49e11 < 0.01

    def test_energy_eff_identity(self):
        # efficiency is 1/(L * gate energy): independent of memory size and clock
        small = PimArch("small", 1024, 1024, GIB, 6.4e-15, 100e6)
        for lat in (17, 578, 18144):
            a = pim_vector_perf(MEMRISTIVE, lat)
            b = pim_vector_perf(small, lat)
            assert a.energy_efficiency == pytest.approx(1 / (lat * 6.4e-15), rel=1e-12)
            assert a.energy_efficiency == pytest.approx(b.energy_efficiency, rel=1e-12)

    def test_frequency_scaling_exact(self):
        for lat in (578, 3978):
            m = pim_vector_perf(MEMRISTIVE, lat)
            d = pim_vector_perf(DRAM, lat)
            assert d.throughput / m.throughput == pytest.approx(0.5e6 / 333e6, rel=1e-12)

    def test_monotonic_in_latency(self):
        prev = math.inf
        for lat in (1, 2, 17, 578, 10**6):
            p = pim_vector_perf(MEMRISTIVE, lat)
            assert p.throughput < prev
            assert p.power == derive(MEMRISTIVE).max_power
            prev = p.throughput

    def test_invalid_latency(self):
        with pytest.raises(InvalidOperationError):
            pim_vector_perf(MEMRISTIVE, 0)


class TestGpuModels:
    def test_membound_32bit(self):
        p = gpu_membound_perf(A6000, 12)
        assert abs(p.throughput - 5.74e10) / 5.74e10 < 0.01

    def test_membound_full_bandwidth(self):
        gpu = GpuArch(**{**A6000.__dict__, "bandwidth_efficiency": 1.0})
        assert gpu_membound_perf(gpu, 12).throughput == pytest.approx(6.4e10)

    def test_membound_proportionality(self):
        assert gpu_membound_perf(A6000, 24).throughput == \
            pytest.approx(gpu_membound_perf(A6000, 12).throughput / 2)

    def test_peak(self):
        p = gpu_peak_perf(A6000)
        assert p.throughput == 3.87e13
        assert p.energy_efficiency == 1.29e11           # exact division

    def test_eta_bounds(self):
        with pytest.raises(InvalidOperationError):
            GpuArch(**{**A6000.__dict__, "bandwidth_efficiency": 1.5})


class TestImprovementRatio:
    def test_identity(self):
        p = pim_vector_perf(MEMRISTIVE, 578)
        assert improvement_ratio(p, p) == 1.0

    def test_fig4_add_point(self):
        p = pim_vector_perf(MEMRISTIVE, 578)
        g = gpu_membound_perf(A6000, 12)
        assert abs(improvement_ratio(p, g) - 4.07e3) / 4.07e3 < 0.02

    def test_closed_form_matches_quotient(self):
        from fractions import Fraction
        for lat, bits in ((578, 32), (4944, 16), (11616, 32), (2779, 16)):
            cc = Fraction(lat, 3 * bits)
            p = pim_vector_perf(MEMRISTIVE, lat)
            g = gpu_membound_perf(A6000, 3 * bits / 8)
            direct = improvement_ratio(p, g)
            closed = vector_improvement_closed_form(MEMRISTIVE, A6000, cc)
            assert abs(direct - closed) / closed < 1e-9

    def test_inverse_law_product_constant(self):
        from fractions import Fraction
        products = []
        for lat, bits in ((578, 32), (289, 16), (18144, 32), (4944, 16),
                          (11616, 32), (2779, 16), (3978, 32), (1989, 16)):
            cc = Fraction(lat, 3 * bits)
            p = pim_vector_perf(MEMRISTIVE, lat)
            g = gpu_membound_perf(A6000, 3 * bits / 8)
            products.append(float(cc) * improvement_ratio(p, g))
        base = products[0]
        for pr in products:
            assert abs(pr - base) / base < 1e-9


class TestConfigLoading:
    def test_default_config_mirrors_presets(self):
        pims, gpus = load_architectures(DEFAULT_CONFIG)
        assert pims["memristive"] == MEMRISTIVE
        assert pims["dram"] == DRAM
        assert gpus["a6000"] == A6000
