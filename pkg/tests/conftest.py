import numpy as np
import pytest

from laurent_spectra import BlockLaurentCoefficients


@pytest.fixture
def ex1():
    """A(z) = [[z, 0], [1, 0]]: unit-circle curve plus the point 0."""
    return BlockLaurentCoefficients(
        2, {0: [[0, 0], [1, 0]], 1: [[1, 0], [0, 0]]}
    )


@pytest.fixture
def ex2():
    """A(z) = [[0, z], [z, 0]]: normal symbol, curves +z and -z."""
    return BlockLaurentCoefficients(2, {1: [[0, 1], [1, 0]]})


@pytest.fixture
def ex3():
    """A(z) = [[2(1+i), z], [4/z, 2(1-i)]]: defective everywhere, spectrum {2}."""
    return BlockLaurentCoefficients(
        2,
        {
            -1: [[0, 0], [4, 0]],
            0: [[2 + 2j, 0], [0, 2 - 2j]],
            1: [[0, 1], [0, 0]],
        },
    )


@pytest.fixture
def ex4():
    """A(z) with curves z and 2z - 1 touching (non-diagonalizably) at z = 1."""
    return BlockLaurentCoefficients(
        2,
        {
            0: [[-0.5, 0.5j], [-0.5j, -0.5]],
            1: [[1, 0], [1j, 2]],
        },
    )


@pytest.fixture
def sqrt_monodromy():
    """A(z) = [[0, z], [1, 0]]: eigenvalues are the two branches of sqrt(z)."""
    return BlockLaurentCoefficients(
        2, {0: [[0, 0], [1, 0]], 1: [[0, 1], [0, 0]]}
    )


def random_coefficients(rng, d=None, band=None):
    """Seeded random symbol with d <= 3 and band <= 2."""
    if d is None:
        d = int(rng.integers(1, 4))
    if band is None:
        band = int(rng.integers(0, 3))
    return BlockLaurentCoefficients(
        d,
        {
            n: rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            for n in range(-band, band + 1)
        },
    )
