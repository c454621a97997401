import pytest

from colpim import fixed, half, single
from colpim.kernels import (build_fixed_add, build_fixed_mult, build_float_add,
                            build_float_mult)


@pytest.fixture(scope="session")
def add8():
    return build_fixed_add(fixed(8))


@pytest.fixture(scope="session")
def mult8():
    return build_fixed_mult(fixed(8))


@pytest.fixture(scope="session")
def add32():
    return build_fixed_add(fixed(32))


@pytest.fixture(scope="session")
def mult32():
    return build_fixed_mult(fixed(32))


@pytest.fixture(scope="session")
def fadd16():
    return build_float_add(half())


@pytest.fixture(scope="session")
def fmult16():
    return build_float_mult(half())


@pytest.fixture(scope="session")
def fadd32():
    return build_float_add(single())


@pytest.fixture(scope="session")
def fmult32():
    return build_float_mult(single())


def float_edge_patterns(fmt):
    """Directed operand bit patterns: zeros, subnormal boundaries, infs, NaNs,
    exact powers and tie generators, both signs."""
    ne, nm = fmt.exponent_bits, fmt.mantissa_bits
    emax = (1 << ne) - 1
    bias = (1 << (ne - 1)) - 1
    vals = [
        0,                                  # +0
        1,                                  # smallest subnormal
        2, 3, 42,
        (1 << nm) - 1,                      # largest subnormal
        1 << nm,                            # smallest normal
        (1 << nm) | 1,
        ((emax - 1) << nm) | ((1 << nm) - 1),   # largest normal
        emax << nm,                         # infinity
        (emax << nm) | (1 << (nm - 1)),     # quiet NaN
        (emax << nm) | 1,                   # NaN with payload
        bias << nm,                         # 1.0
        (bias << nm) | (1 << (nm - 1)),     # 1.5
        (bias << nm) | 1,                   # 1 + ulp
        (bias + 1) << nm,                   # 2.0
        (bias - nm - 1) << nm,              # 2^-(nm+1): RNE tie against 1.0
        (bias - nm) << nm,                  # 2^-nm
        (bias - 1) << nm,                   # 0.5
    ]
    sign = 1 << (fmt.total_bits - 1)
    return [x for a in vals for x in (a, a | sign)]


@pytest.fixture(scope="session")
def edge_pairs_half():
    pats = float_edge_patterns(half())
    return [(a, b) for a in pats for b in pats]


@pytest.fixture(scope="session")
def edge_pairs_single():
    pats = float_edge_patterns(single())
    return [(a, b) for a in pats for b in pats]
