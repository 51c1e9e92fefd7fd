"""Shared golden number systems used across the test modules."""

from __future__ import annotations

import pytest

from radixion.algebra import MinimalPolynomial
from radixion.numeration import NumberSystem

# base -1+i, digits {0, 1}
KNUTH = ("2,2,1", "0,0;1,0")
# base -2, digits {0, 1}
NEGABINARY = ("2,1", "0;1")
# base 1+i, digits {0, 1}: not finitely representable
ONE_PLUS_I = ("2,-2,1", "0,0;1,0")
# base -2+i, digits {0,...,4}
FIVE_A = ("5,4,1", "0,0;1,0;2,0;3,0;4,0")
# base -2+i, digits {0, -2i, 2, 3, 4}; -2i = -4 - 2q
FIVE_B = ("5,4,1", "0,0;-4,-2;2,0;3,0;4,0")


def make_system(spec) -> NumberSystem:
    return NumberSystem.parse(*spec)


@pytest.fixture(scope="session")
def knuth() -> NumberSystem:
    return make_system(KNUTH)


@pytest.fixture(scope="session")
def negabinary() -> NumberSystem:
    return make_system(NEGABINARY)


@pytest.fixture(scope="session")
def one_plus_i() -> NumberSystem:
    return make_system(ONE_PLUS_I)


@pytest.fixture(scope="session")
def five_a() -> NumberSystem:
    return make_system(FIVE_A)


@pytest.fixture(scope="session")
def five_b() -> NumberSystem:
    return make_system(FIVE_B)


@pytest.fixture(scope="session")
def knuth_poly() -> MinimalPolynomial:
    return MinimalPolynomial.parse("2,2,1")
